//! The equation engine: residual evaluation for
//! f(xy) + mu(y) f(sigma(y) x) = 2 f(x) g(y), construction of the two
//! nontrivial solution families, an exact linear oracle that solves for f
//! given g, identity checks on verified solution pairs, and the conformance
//! verdict that plays the families against the oracle.
//!
//! For fixed g the equation is linear in f, so the oracle is a plain exact
//! nullspace computation. Families are verified member-by-member against the
//! residual before they are returned; a nonzero residual there is not a user
//! error but a falsification of the classification and is reported as such.

use crate::characters::{
    additive_space, chi_decompose, enumerate_multiplicative, p_chi_product_closure,
    star_character, CharacterError, ChiDecomposition, ComplexValuedMap, MultiplicativeFunction,
    AdmissibleWeight,
};
use crate::cyclotomic::{CycNumber, Rational};
use crate::linalg::{rank, solve_linear, spans_equal, LinearSystem, SolutionSpace};
use crate::semigroup::{Automorphism, FiniteSemigroup};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum WilsonError {
    #[error("precondition violated: {name}")]
    PreconditionViolated { name: &'static str },
    #[error("residual is nonzero at ({x}, {y}): {value}; this falsifies the classification")]
    ResidualNonzero { x: usize, y: usize, value: String },
    #[error("structural infeasibility: {detail}")]
    StructuralInfeasibility { detail: String },
    #[error(transparent)]
    Character(#[from] CharacterError),
}

/// Shape of the twisted term. `FlippedTwist` negates it and exists only so
/// the failure-detection path can be exercised end to end; it is never a
/// valid model of the equation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ResidualForm {
    #[default]
    Standard,
    FlippedTwist,
}

/// A semigroup together with an admissible weight (which carries sigma).
#[derive(Clone, Debug)]
pub struct WilsonContext {
    s: FiniteSemigroup,
    weight: AdmissibleWeight,
    form: ResidualForm,
}

impl WilsonContext {
    pub fn new(s: FiniteSemigroup, weight: AdmissibleWeight) -> Self {
        Self::with_form(s, weight, ResidualForm::Standard)
    }

    pub fn with_form(s: FiniteSemigroup, weight: AdmissibleWeight, form: ResidualForm) -> Self {
        assert_eq!(weight.sigma().degree(), s.order(), "weight built for another carrier");
        WilsonContext { s, weight, form }
    }

    pub fn semigroup(&self) -> &FiniteSemigroup {
        &self.s
    }

    pub fn weight(&self) -> &AdmissibleWeight {
        &self.weight
    }

    pub fn sigma(&self) -> &Automorphism {
        self.weight.sigma()
    }

    pub fn order(&self) -> usize {
        self.s.order()
    }

    /// Stable identifier: digest of the table, sigma, and mu values.
    pub fn context_id(&self) -> String {
        let mut hasher = Sha256::new();
        let table: Vec<String> = self.s.flat_table().iter().map(|v| v.to_string()).collect();
        hasher.update(table.join(","));
        hasher.update(";");
        let perm: Vec<String> = self.sigma().perm().iter().map(|v| v.to_string()).collect();
        hasher.update(perm.join(","));
        hasher.update(";");
        let mu: Vec<String> = (0..self.order())
            .map(|x| self.weight.value(x).to_text())
            .collect();
        hasher.update(mu.join(","));
        format!("{:x}", hasher.finalize())
    }

    pub fn star(&self, h: &ComplexValuedMap) -> ComplexValuedMap {
        crate::characters::star(h, &self.weight)
    }

    pub fn even_part(&self, h: &ComplexValuedMap) -> ComplexValuedMap {
        crate::characters::even_part(h, &self.weight)
    }

    pub fn odd_part(&self, h: &ComplexValuedMap) -> ComplexValuedMap {
        crate::characters::odd_part(h, &self.weight)
    }

    pub fn residual(
        &self,
        f: &ComplexValuedMap,
        g: &ComplexValuedMap,
        x: usize,
        y: usize,
    ) -> CycNumber {
        let sigma = self.sigma();
        let twist = self.weight.value(y) * f.value(self.s.mul(sigma.apply(y), x));
        let signed_twist = match self.form {
            ResidualForm::Standard => twist,
            ResidualForm::FlippedTwist => -&twist,
        };
        let double = f.value(x) * g.value(y);
        let double = &double + &double;
        &(f.value(self.s.mul(x, y)) + &signed_twist) - &double
    }

    pub fn residual_grid(&self, f: &ComplexValuedMap, g: &ComplexValuedMap) -> ResidualGrid {
        let n = self.order();
        let values = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| self.residual(f, g, x, y))
            .collect();
        ResidualGrid { n, values }
    }

    pub fn is_solution(&self, f: &ComplexValuedMap, g: &ComplexValuedMap) -> bool {
        self.residual_grid(f, g).first_nonzero().is_none()
    }
}

/// All n^2 residual values, row-major in (x, y).
#[derive(Clone, PartialEq, Debug)]
pub struct ResidualGrid {
    n: usize,
    values: Vec<CycNumber>,
}

impl ResidualGrid {
    pub fn value(&self, x: usize, y: usize) -> &CycNumber {
        &self.values[x * self.n + y]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Lexicographically first (x, y) with a nonzero residual.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &CycNumber)> {
        self.values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i / self.n, i % self.n, v))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    Case1,
    Case2,
    Case3,
    HomogeneousG0,
    Unclassified,
}

/// A concrete (f, g) pair whose residual vanished at construction.
#[derive(Clone, PartialEq, Debug)]
pub struct SolutionPair {
    pub f: ComplexValuedMap,
    pub g: ComplexValuedMap,
    pub tag: CaseTag,
}

/// Exact solution space of the rho constraints over the elements of P_chi
/// (sorted ascending): translation compatibility, star-oddness, and the
/// zeroing forced by products from outside the ideal.
#[derive(Clone, PartialEq, Debug)]
pub struct RhoSpace {
    pub domain: Vec<usize>,
    pub basis: Vec<Vec<CycNumber>>,
}

impl RhoSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// One classification case for one chi, presented as a basis of f-vectors
/// sharing a single g. Every basis member has verified zero residual, and
/// the f-space is linear for fixed g, so the span is exactly the set of
/// materializable solutions (minus the excluded all-zero choice).
#[derive(Clone, PartialEq, Debug)]
pub struct SolutionFamily {
    pub tag: CaseTag,
    pub chi: MultiplicativeFunction,
    pub g: ComplexValuedMap,
    pub basis: Vec<ComplexValuedMap>,
    /// Case 2: whether chi is sigma-squared invariant (the chi* slot exists).
    pub sigma_sq_invariant: Option<bool>,
    /// Case 3: dimensions of the three parameter blocks (c, A, rho).
    pub case3_blocks: Option<(usize, usize, usize)>,
}

impl SolutionFamily {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Linear combination of the basis; the all-zero choice is rejected
    /// because the classification demands a nonzero f in cases 2 and 3.
    pub fn materialize(&self, coeffs: &[CycNumber]) -> Result<SolutionPair, WilsonError> {
        if coeffs.len() != self.basis.len() {
            return Err(WilsonError::PreconditionViolated {
                name: "coefficient_count",
            });
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(WilsonError::PreconditionViolated {
                name: "all_parameters_zero",
            });
        }
        let n = self.g.len();
        let mut f = ComplexValuedMap::zero(n);
        for (c, b) in coeffs.iter().zip(self.basis.iter()) {
            f = f.add(&b.scale(c));
        }
        Ok(SolutionPair {
            f,
            g: self.g.clone(),
            tag: self.tag,
        })
    }
}

fn map_vec(m: &ComplexValuedMap) -> Vec<CycNumber> {
    m.values().to_vec()
}

fn verify_family_basis(
    ctx: &WilsonContext,
    basis: &[ComplexValuedMap],
    g: &ComplexValuedMap,
) -> Result<(), WilsonError> {
    for f in basis {
        if let Some((x, y, v)) = ctx.residual_grid(f, g).first_nonzero() {
            return Err(WilsonError::ResidualNonzero {
                x,
                y,
                value: v.to_text(),
            });
        }
    }
    Ok(())
}

/// g common to both nontrivial cases: (chi + chi*)/2, which collapses to chi
/// when chi is star-fixed.
pub fn family_g(ctx: &WilsonContext, chi: &MultiplicativeFunction) -> ComplexValuedMap {
    let star = star_character(&ctx.s, chi, &ctx.weight);
    let half = Rational::new(1.into(), 2.into());
    chi.as_map().add(star.as_map()).scale_rational(&half)
}

/// f = alpha chi + beta chi*, g = (chi + chi*)/2, requiring chi* != chi,
/// a nonzero coefficient pair, and sigma-squared invariance when beta != 0.
pub fn build_case2(
    ctx: &WilsonContext,
    chi: &MultiplicativeFunction,
    alpha: &CycNumber,
    beta: &CycNumber,
) -> Result<SolutionPair, WilsonError> {
    if chi.is_zero() {
        return Err(WilsonError::PreconditionViolated { name: "chi_zero" });
    }
    let star = star_character(&ctx.s, chi, &ctx.weight);
    if star == *chi {
        return Err(WilsonError::PreconditionViolated {
            name: "chi_star_equals_chi",
        });
    }
    if alpha.is_zero() && beta.is_zero() {
        return Err(WilsonError::PreconditionViolated {
            name: "alpha_beta_both_zero",
        });
    }
    if !beta.is_zero() {
        let sigma_sq = ctx.sigma().compose(ctx.sigma());
        if chi.as_map().compose_perm(&sigma_sq) != *chi.as_map() {
            return Err(WilsonError::PreconditionViolated {
                name: "chi_sigma_squared",
            });
        }
    }
    let f = chi.as_map().scale(alpha).add(&star.as_map().scale(beta));
    let g = family_g(ctx, chi);
    if let Some((x, y, v)) = ctx.residual_grid(&f, &g).first_nonzero() {
        return Err(WilsonError::ResidualNonzero {
            x,
            y,
            value: v.to_text(),
        });
    }
    Ok(SolutionPair {
        f,
        g,
        tag: CaseTag::Case2,
    })
}

/// The case-2 family for one chi with chi* != chi: the chi slot always, the
/// chi* slot exactly when chi is sigma-squared invariant.
pub fn case2_family(
    ctx: &WilsonContext,
    chi: &MultiplicativeFunction,
) -> Result<SolutionFamily, WilsonError> {
    if chi.is_zero() {
        return Err(WilsonError::PreconditionViolated { name: "chi_zero" });
    }
    let star = star_character(&ctx.s, chi, &ctx.weight);
    if star == *chi {
        return Err(WilsonError::PreconditionViolated {
            name: "chi_star_equals_chi",
        });
    }
    let sigma_sq = ctx.sigma().compose(ctx.sigma());
    let invariant = chi.as_map().compose_perm(&sigma_sq) == *chi.as_map();
    let mut basis = vec![chi.as_map().clone()];
    if invariant {
        basis.push(star.as_map().clone());
    }
    let g = family_g(ctx, chi);
    verify_family_basis(ctx, &basis, &g)?;
    Ok(SolutionFamily {
        tag: CaseTag::Case2,
        chi: chi.clone(),
        g,
        basis,
        sigma_sq_invariant: Some(invariant),
        case3_blocks: None,
    })
}

/// Constraint solve for rho on P_chi. The translation products up, pv, upv
/// stay in P_chi whenever p does (closure under outside translation), and
/// sigma preserves P_chi because chi* = chi pins the zero set; both facts
/// are re-verified and demoted to structural infeasibility if they fail.
fn rho_space(
    ctx: &WilsonContext,
    chi: &MultiplicativeFunction,
    dec: &ChiDecomposition,
) -> Result<RhoSpace, WilsonError> {
    let s = &ctx.s;
    let domain = dec.p_chi.as_sorted_vec();
    if domain.is_empty() {
        return Ok(RhoSpace {
            domain,
            basis: Vec::new(),
        });
    }
    let idx = |q: usize| domain.iter().position(|&d| d == q);
    let k = domain.len();
    let mut rows: Vec<Vec<CycNumber>> = Vec::new();
    let row_for = |q: usize, p_pos: usize, scale: &CycNumber| -> Result<Vec<CycNumber>, WilsonError> {
        let q_pos = idx(q).ok_or_else(|| WilsonError::StructuralInfeasibility {
            detail: format!("translate {q} of a P element left P"),
        })?;
        let mut row = vec![CycNumber::zero(); k];
        row[q_pos] = &row[q_pos] + &CycNumber::one();
        row[p_pos] = &row[p_pos] - scale;
        Ok(row)
    };
    for (p_pos, &p) in domain.iter().enumerate() {
        for u in dec.complement.iter() {
            rows.push(row_for(s.mul(u, p), p_pos, chi.value(u))?);
            rows.push(row_for(s.mul(p, u), p_pos, chi.value(u))?);
            for v in dec.complement.iter() {
                let uv = s.mul(u, v);
                rows.push(row_for(s.mul(s.mul(u, p), v), p_pos, chi.value(uv))?);
            }
        }
        // star-oddness mu(p) rho(sigma(p)) + rho(p) = 0
        let sp = ctx.sigma().apply(p);
        let sp_pos = idx(sp).ok_or_else(|| WilsonError::StructuralInfeasibility {
            detail: format!("sigma({p}) = {sp} left P"),
        })?;
        let mut row = vec![CycNumber::zero(); k];
        row[sp_pos] = &row[sp_pos] + ctx.weight.value(p);
        row[p_pos] = &row[p_pos] + &CycNumber::one();
        rows.push(row);
    }
    // products of outside elements with the dead layer must vanish on P
    let dead = dec.i_chi.difference(&dec.p_chi);
    for x in dec.complement.iter() {
        for y in dead.iter() {
            for q in [s.mul(x, y), s.mul(y, x)] {
                if let Some(q_pos) = idx(q) {
                    let mut row = vec![CycNumber::zero(); k];
                    row[q_pos] = &row[q_pos] + &CycNumber::one();
                    rows.push(row);
                }
            }
        }
    }
    let sys = LinearSystem::homogeneous(rows).expect("rows are rectangular");
    let space = solve_linear(&sys).expect("well-formed system");
    Ok(RhoSpace {
        domain,
        basis: space.nullspace,
    })
}

/// The case-3 family for a star-fixed chi: a constant slot, the sigma-odd
/// additive slots on the complement (trivial on finite carriers), and the
/// rho slots on P_chi. Every basis member is residual-verified.
pub fn build_case3_family(
    ctx: &WilsonContext,
    chi: &MultiplicativeFunction,
) -> Result<SolutionFamily, WilsonError> {
    if chi.is_zero() {
        return Err(WilsonError::PreconditionViolated { name: "chi_zero" });
    }
    let star = star_character(&ctx.s, chi, &ctx.weight);
    if star != *chi {
        return Err(WilsonError::PreconditionViolated {
            name: "chi_star_not_equal_chi",
        });
    }
    let n = ctx.order();
    let dec = chi_decompose(&ctx.s, chi)?;
    let additive = additive_space(&ctx.s, &dec.complement, Some(ctx.sigma()))?;
    let odd_basis = additive
        .sigma_odd_basis
        .as_ref()
        .expect("sigma was supplied");
    let rho = rho_space(ctx, chi, &dec)?;

    let mut basis = vec![chi.as_map().clone()]; // c-slot: chi vanishes on the ideal
    let complement_sorted = dec.complement.as_sorted_vec();
    for a in odd_basis {
        let mut values = vec![CycNumber::zero(); n];
        for (i, &x) in complement_sorted.iter().enumerate() {
            values[x] = chi.value(x).scale(&a[i]);
        }
        basis.push(ComplexValuedMap::new(values));
    }
    for r in &rho.basis {
        let mut values = vec![CycNumber::zero(); n];
        for (i, &p) in rho.domain.iter().enumerate() {
            values[p] = r[i].clone();
        }
        basis.push(ComplexValuedMap::new(values));
    }
    let g = chi.as_map().clone();
    verify_family_basis(ctx, &basis, &g)?;
    Ok(SolutionFamily {
        tag: CaseTag::Case3,
        chi: chi.clone(),
        g,
        basis,
        sigma_sq_invariant: None,
        case3_blocks: Some((1, odd_basis.len(), rho.dimension())),
    })
}

/// Dispatch on the star-fixedness of chi, mirroring the case split of the
/// classification.
pub fn theorem_family(
    ctx: &WilsonContext,
    chi: &MultiplicativeFunction,
) -> Result<SolutionFamily, WilsonError> {
    if chi.is_zero() {
        return Err(WilsonError::PreconditionViolated { name: "chi_zero" });
    }
    let star = star_character(&ctx.s, chi, &ctx.weight);
    if star == *chi {
        build_case3_family(ctx, chi)
    } else {
        case2_family(ctx, chi)
    }
}

/// Exact nullspace of the f-system for fixed g: one equation per ordered
/// pair (x, y), unknowns f(0..n).
pub fn solve_f_given_g(ctx: &WilsonContext, g: &ComplexValuedMap) -> SolutionSpace {
    let n = ctx.order();
    let sigma = ctx.sigma();
    let two = CycNumber::from_integer(2);
    let mut rows = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut row = vec![CycNumber::zero(); n];
            let xy = ctx.s.mul(x, y);
            row[xy] = &row[xy] + &CycNumber::one();
            let tw = ctx.s.mul(sigma.apply(y), x);
            let mu_y = ctx.weight.value(y);
            row[tw] = match ctx.form {
                ResidualForm::Standard => &row[tw] + mu_y,
                ResidualForm::FlippedTwist => &row[tw] - mu_y,
            };
            row[x] = &row[x] - &(&two * g.value(y));
            rows.push(row);
        }
    }
    let sys = LinearSystem::homogeneous(rows).expect("rows are rectangular");
    solve_linear(&sys).expect("well-formed system")
}

/// Per-chi line of a conformance report; all scalar values serialized in
/// the exact text form.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ChiEntry {
    pub chi: Vec<String>,
    pub case: CaseTag,
    pub family_dimension: usize,
    pub oracle_dimension: usize,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_sq_invariant: Option<bool>,
    pub ideal_size: usize,
    pub ideal_square_size: usize,
    pub p_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_product_closed: Option<bool>,
    pub additive_dimension: usize,
    pub rho_dimension: usize,
    pub abelian_ok: bool,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub value_count: usize,
    pub grids_checked: usize,
    pub zero_only: usize,
    pub classified: usize,
    pub unclassified: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub context_id: String,
    pub order: usize,
    pub sigma: Vec<usize>,
    pub mu: Vec<String>,
    pub entries: Vec<ChiEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSummary>,
    pub findings: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum ProbeMode {
    /// Probe when the order is at most 3.
    #[default]
    Auto,
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ConformanceOptions {
    pub probe: ProbeMode,
}

/// Half-sums over {0} and the fourth roots of unity: every g value the
/// classification can produce from characters of period dividing 4.
pub fn probe_values() -> Vec<CycNumber> {
    let mut palette = vec![CycNumber::zero()];
    for k in 0..4 {
        palette.push(CycNumber::root_of_unity(k, 4).expect("conductor 4 under cap"));
    }
    let half = Rational::new(1.into(), 2.into());
    let mut out: Vec<CycNumber> = Vec::new();
    for a in &palette {
        for b in &palette {
            let v = (a + b).scale(&half);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Families against the oracle for every nonzero chi, plus the restricted
/// value-grid probe on small carriers. All mismatches and construction
/// failures land in `findings`; `pass` means the report is clean.
pub fn conformance_check(ctx: &WilsonContext, opts: ConformanceOptions) -> ConformanceReport {
    let n = ctx.order();
    let mut entries = Vec::new();
    let mut findings = Vec::new();
    let mut families: Vec<SolutionFamily> = Vec::new();

    for chi in enumerate_multiplicative(&ctx.s) {
        if chi.is_zero() {
            continue;
        }
        let dec = chi_decompose(&ctx.s, &chi).expect("chi is nonzero");
        let (i_size, sq_size, p_size) = (dec.i_chi.len(), dec.i_chi_sq.len(), dec.p_chi.len());
        let p_closed = if p_size > 0 {
            Some(p_chi_product_closure(&ctx.s, &dec))
        } else {
            None
        };
        match theorem_family(ctx, &chi) {
            Err(e) => {
                findings.push(format!(
                    "family construction failed for chi {:?}: {e}",
                    chi.as_map().to_text_vec()
                ));
            }
            Ok(family) => {
                let oracle = solve_f_given_g(ctx, &family.g);
                let family_vecs: Vec<Vec<CycNumber>> = family.basis.iter().map(map_vec).collect();
                let matched = spans_equal(&family_vecs, &oracle.nullspace)
                    .expect("uniform vector lengths");
                if !matched {
                    findings.push(format!(
                        "family/oracle mismatch for chi {:?}: family {} vs oracle {}",
                        chi.as_map().to_text_vec(),
                        family_vecs.len(),
                        oracle.nullspace.len()
                    ));
                }
                let abelian_ok = family.basis.iter().all(|f| f.is_abelian(&ctx.s))
                    && family.g.is_abelian(&ctx.s);
                if !abelian_ok {
                    findings.push(format!(
                        "non-abelian family member for chi {:?}",
                        chi.as_map().to_text_vec()
                    ));
                }
                let (add_dim, rho_dim) = match family.case3_blocks {
                    Some((_, a, r)) => (a, r),
                    None => (0, 0),
                };
                entries.push(ChiEntry {
                    chi: chi.as_map().to_text_vec(),
                    case: family.tag,
                    family_dimension: family.dimension(),
                    oracle_dimension: oracle.nullspace.len(),
                    matched,
                    sigma_sq_invariant: family.sigma_sq_invariant,
                    ideal_size: i_size,
                    ideal_square_size: sq_size,
                    p_size,
                    p_product_closed: p_closed,
                    additive_dimension: add_dim,
                    rho_dimension: rho_dim,
                    abelian_ok,
                });
                families.push(family);
            }
        }
    }

    let run_probe = match opts.probe {
        ProbeMode::On => true,
        ProbeMode::Off => false,
        ProbeMode::Auto => n <= 3,
    };
    let probe = run_probe.then(|| run_value_probe(ctx, &families, &mut findings));

    let pass = findings.is_empty();
    ConformanceReport {
        context_id: ctx.context_id(),
        order: n,
        sigma: ctx.sigma().perm().to_vec(),
        mu: (0..n).map(|x| ctx.weight.value(x).to_text()).collect(),
        entries,
        probe,
        findings,
        pass,
    }
}

fn run_value_probe(
    ctx: &WilsonContext,
    families: &[SolutionFamily],
    findings: &mut Vec<String>,
) -> ProbeSummary {
    let n = ctx.order();
    let values = probe_values();
    let mut counters = vec![0usize; n];
    let mut grids_checked = 0;
    let mut zero_only = 0;
    let mut classified = 0;
    let mut unclassified = 0;
    loop {
        let g = ComplexValuedMap::new(counters.iter().map(|&i| values[i].clone()).collect());
        if !g.is_zero() {
            grids_checked += 1;
            let oracle = solve_f_given_g(ctx, &g);
            if oracle.nullspace.is_empty() {
                zero_only += 1;
            } else {
                let matching: Vec<&SolutionFamily> =
                    families.iter().filter(|fam| fam.g == g).collect();
                if matching.is_empty() {
                    unclassified += 1;
                    findings.push(format!(
                        "probe: g {:?} admits a {}-dimensional solution space but no family",
                        g.to_text_vec(),
                        oracle.nullspace.len()
                    ));
                } else {
                    let merged: Vec<Vec<CycNumber>> = matching
                        .iter()
                        .flat_map(|fam| fam.basis.iter().map(map_vec))
                        .collect();
                    if spans_equal(&merged, &oracle.nullspace).expect("uniform vector lengths") {
                        classified += 1;
                    } else {
                        unclassified += 1;
                        findings.push(format!(
                            "probe: g {:?} solution space does not match its families",
                            g.to_text_vec()
                        ));
                    }
                }
            }
        }
        // odometer over the value grid
        let mut pos = 0;
        loop {
            if pos == n {
                return ProbeSummary {
                    value_count: values.len(),
                    grids_checked,
                    zero_only,
                    classified,
                    unclassified,
                };
            }
            counters[pos] += 1;
            if counters[pos] < values.len() {
                break;
            }
            counters[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PartStatus {
    Holds,
    HypothesisNotMet,
    Failed { witness: String },
}

/// Statuses for the six derived identities, in order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdentityReport {
    pub parts: [PartStatus; 6],
}

impl IdentityReport {
    pub fn all_good(&self) -> bool {
        self.parts
            .iter()
            .all(|p| !matches!(p, PartStatus::Failed { .. }))
    }
}

/// Checks the six consequences a verified solution pair must satisfy:
/// the sine-addition law for every shifted difference f_a (with abelianness
/// of f_a and g when some f_a is nonzero), two unconditional identities
/// tying f, f*, f^e, f° together, and three conditional representation
/// statements with their hypotheses evaluated first.
pub fn identity_suite(ctx: &WilsonContext, pair: &SolutionPair) -> IdentityReport {
    let s = &ctx.s;
    let n = ctx.order();
    let f = &pair.f;
    let g = &pair.g;
    debug_assert!(ctx.is_solution(f, g));

    // (1) f_a(xy) = f_a(x) g(y) + f_a(y) g(x); f_a, g abelian when f_a != 0
    let mut part1 = PartStatus::Holds;
    let mut any_nonzero_fa = false;
    'outer: for a in 0..n {
        let fa = ComplexValuedMap::new(
            (0..n)
                .map(|x| &(f.value(s.mul(a, x)).clone()) - &(f.value(a) * g.value(x)))
                .collect(),
        );
        for x in 0..n {
            for y in 0..n {
                let lhs = fa.value(s.mul(x, y)).clone();
                let rhs = &(fa.value(x) * g.value(y)) + &(fa.value(y) * g.value(x));
                if lhs != rhs {
                    part1 = PartStatus::Failed {
                        witness: format!("sine addition fails at a={a}, x={x}, y={y}"),
                    };
                    break 'outer;
                }
            }
        }
        if !fa.is_zero() {
            any_nonzero_fa = true;
            if !fa.is_abelian(s) {
                part1 = PartStatus::Failed {
                    witness: format!("f_a not abelian at a={a}"),
                };
                break;
            }
        }
    }
    if part1 == PartStatus::Holds && any_nonzero_fa && !g.is_abelian(s) {
        part1 = PartStatus::Failed {
            witness: "g not abelian despite nonzero f_a".to_string(),
        };
    }

    let f_star = ctx.star(f);
    let f_even = ctx.even_part(f);
    let f_odd = ctx.odd_part(f);

    // (2) f°(xy) = f(x) g(y) - f*(y) g(x)
    let mut part2 = PartStatus::Holds;
    'p2: for x in 0..n {
        for y in 0..n {
            let lhs = f_odd.value(s.mul(x, y)).clone();
            let rhs = &(f.value(x) * g.value(y)) - &(f_star.value(y) * g.value(x));
            if lhs != rhs {
                part2 = PartStatus::Failed {
                    witness: format!("odd-part identity fails at x={x}, y={y}"),
                };
                break 'p2;
            }
        }
    }

    // (3) f(xy) = 2 f(x) g(y) + 2 f(y) g(x) - 4 f^e(y) g(x) + f*(xy)
    let two = CycNumber::from_integer(2);
    let four = CycNumber::from_integer(4);
    let mut part3 = PartStatus::Holds;
    'p3: for x in 0..n {
        for y in 0..n {
            let xy = s.mul(x, y);
            let rhs = &(&(&(&two * &(f.value(x) * g.value(y)))
                + &(&two * &(f.value(y) * g.value(x))))
                - &(&four * &(f_even.value(y) * g.value(x))))
                + f_star.value(xy);
            if *f.value(xy) != rhs {
                part3 = PartStatus::Failed {
                    witness: format!("reconstruction identity fails at x={x}, y={y}"),
                };
                break 'p3;
            }
        }
    }

    // (4) f central and g != 0 imply f^e, g linearly dependent
    let part4 = if f.is_central(s) && !g.is_zero() {
        if rank(&[map_vec(&f_even), map_vec(g)]).expect("uniform vector lengths") <= 1 {
            PartStatus::Holds
        } else {
            PartStatus::Failed {
                witness: "f even part independent of g".to_string(),
            }
        }
    } else {
        PartStatus::HypothesisNotMet
    };

    // (5) f^e, g independent and g != 0 imply g(xy) = f(x) h1(y) + g(x) h2(y)
    let independent = rank(&[map_vec(&f_even), map_vec(g)]).expect("uniform vector lengths") == 2;
    let part5 = if independent && !g.is_zero() {
        let mut status = PartStatus::Holds;
        for y in 0..n {
            let rows: Vec<Vec<CycNumber>> = (0..n)
                .map(|x| vec![f.value(x).clone(), g.value(x).clone()])
                .collect();
            let rhs: Vec<CycNumber> = (0..n).map(|x| g.value(s.mul(x, y)).clone()).collect();
            let sys = LinearSystem::new(rows, rhs).expect("shapes agree");
            if !solve_linear(&sys).expect("well-formed").is_consistent() {
                status = PartStatus::Failed {
                    witness: format!("no (h1, h2) representation at y={y}"),
                };
                break;
            }
        }
        status
    } else {
        PartStatus::HypothesisNotMet
    };

    // (6) g nonzero multiplicative implies f(xy) = f(x) g(y) + g(x) h(y)
    let g_multiplicative = MultiplicativeFunction::new(s, g.clone()).is_ok();
    let part6 = if g_multiplicative && !g.is_zero() {
        let mut status = PartStatus::Holds;
        for y in 0..n {
            let rows: Vec<Vec<CycNumber>> = (0..n).map(|x| vec![g.value(x).clone()]).collect();
            let rhs: Vec<CycNumber> = (0..n)
                .map(|x| &(f.value(s.mul(x, y)).clone()) - &(f.value(x) * g.value(y)))
                .collect();
            let sys = LinearSystem::new(rows, rhs).expect("shapes agree");
            if !solve_linear(&sys).expect("well-formed").is_consistent() {
                status = PartStatus::Failed {
                    witness: format!("no h representation at y={y}"),
                };
                break;
            }
        }
        status
    } else {
        PartStatus::HypothesisNotMet
    };

    IdentityReport {
        parts: [part1, part2, part3, part4, part5, part6],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_weights;

    fn identity_context(s: FiniteSemigroup) -> WilsonContext {
        let n = s.order();
        let sigma = Automorphism::identity(n);
        let weights = enumerate_weights(&s, &sigma);
        let one = weights
            .into_iter()
            .find(|w| (0..n).all(|x| w.value(x).is_one()))
            .expect("constant-one weight always admissible");
        WilsonContext::new(s, one)
    }

    fn null2_ctx() -> WilsonContext {
        identity_context(FiniteSemigroup::from_table(&[vec![0, 0], vec![0, 0]]).unwrap())
    }

    fn c2_ctx() -> WilsonContext {
        identity_context(FiniteSemigroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap())
    }

    fn c3_inversion_ctx() -> WilsonContext {
        let s = FiniteSemigroup::from_table(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]])
            .unwrap();
        let sigma = Automorphism::new(&s, vec![0, 2, 1]).unwrap();
        let weights = enumerate_weights(&s, &sigma);
        let one = weights
            .into_iter()
            .find(|w| (0..3).all(|x| w.value(x).is_one()))
            .unwrap();
        WilsonContext::new(s, one)
    }

    fn unit_p_zero_ctx() -> WilsonContext {
        identity_context(
            FiniteSemigroup::from_table(&[vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]).unwrap(),
        )
    }

    /// order-4 monoid {1, p, q, 0} with sigma swapping p and q
    fn swap_ctx() -> WilsonContext {
        let s = FiniteSemigroup::from_table(&[
            vec![0, 1, 2, 3],
            vec![1, 3, 3, 3],
            vec![2, 3, 3, 3],
            vec![3, 3, 3, 3],
        ])
        .unwrap();
        let sigma = Automorphism::new(&s, vec![0, 2, 1, 3]).unwrap();
        let weights = enumerate_weights(&s, &sigma);
        let one = weights
            .into_iter()
            .find(|w| (0..4).all(|x| w.value(x).is_one()))
            .unwrap();
        WilsonContext::new(s, one)
    }

    fn int_map(vals: &[i64]) -> ComplexValuedMap {
        ComplexValuedMap::new(vals.iter().map(|&v| CycNumber::from_integer(v)).collect())
    }

    fn chi_of(ctx: &WilsonContext, vals: ComplexValuedMap) -> MultiplicativeFunction {
        MultiplicativeFunction::new(ctx.semigroup(), vals).unwrap()
    }

    #[test]
    fn zero_f_solves_for_any_g() {
        let ctx = c2_ctx();
        let f = ComplexValuedMap::zero(2);
        let g = int_map(&[5, -3]);
        assert!(ctx.is_solution(&f, &g));
    }

    #[test]
    fn remark_fixture_homogeneous_nullspace() {
        let ctx = null2_ctx();
        let f = int_map(&[0, 1]);
        let g = ComplexValuedMap::zero(2);
        assert!(ctx.is_solution(&f, &g));
        let space = solve_f_given_g(&ctx, &g);
        assert_eq!(space.nullspace.len(), 1);
        assert!(crate::linalg::in_span(&space.nullspace, &[
            CycNumber::zero(),
            CycNumber::one()
        ])
        .unwrap());
    }

    #[test]
    fn c2_oracle_dimensions() {
        let ctx = c2_ctx();
        let trivial = int_map(&[1, 1]);
        let space = solve_f_given_g(&ctx, &trivial);
        assert_eq!(space.nullspace.len(), 1);
        assert!(crate::linalg::in_span(&space.nullspace, &[
            CycNumber::one(),
            CycNumber::one()
        ])
        .unwrap());
        let sign = int_map(&[1, -1]);
        let space = solve_f_given_g(&ctx, &sign);
        assert_eq!(space.nullspace.len(), 1);
        assert!(crate::linalg::in_span(&space.nullspace, &[
            CycNumber::one(),
            -&CycNumber::one()
        ])
        .unwrap());
    }

    #[test]
    fn case2_on_c3_with_inversion() {
        let ctx = c3_inversion_ctx();
        let omega = CycNumber::root_of_unity(1, 3).unwrap();
        let chi = chi_of(
            &ctx,
            ComplexValuedMap::new(vec![CycNumber::one(), omega.clone(), &omega * &omega]),
        );
        let pair = build_case2(&ctx, &chi, &CycNumber::one(), &CycNumber::from_integer(2))
            .unwrap();
        assert_eq!(pair.tag, CaseTag::Case2);
        // g = (1, -1/2, -1/2)
        let minus_half = CycNumber::from_ratio(-1, 2);
        assert_eq!(*pair.g.value(1), minus_half);
        assert_eq!(*pair.g.value(2), minus_half);
        assert!(ctx.is_solution(&pair.f, &pair.g));

        let family = case2_family(&ctx, &chi).unwrap();
        assert_eq!(family.dimension(), 2); // sigma^2 = id keeps the star slot
        let oracle = solve_f_given_g(&ctx, &family.g);
        assert_eq!(oracle.nullspace.len(), 2);
    }

    #[test]
    fn case2_preconditions() {
        let ctx = c2_ctx();
        let sign = chi_of(&ctx, int_map(&[1, -1]));
        assert_eq!(
            build_case2(&ctx, &sign, &CycNumber::one(), &CycNumber::zero()),
            Err(WilsonError::PreconditionViolated {
                name: "chi_star_equals_chi"
            })
        );
        let ctx = c3_inversion_ctx();
        let omega = CycNumber::root_of_unity(1, 3).unwrap();
        let chi = chi_of(
            &ctx,
            ComplexValuedMap::new(vec![CycNumber::one(), omega.clone(), &omega * &omega]),
        );
        assert_eq!(
            build_case2(&ctx, &chi, &CycNumber::zero(), &CycNumber::zero()),
            Err(WilsonError::PreconditionViolated {
                name: "alpha_beta_both_zero"
            })
        );
    }

    #[test]
    fn case2_sigma_squared_gate() {
        // Klein four group with a 3-cycle automorphism: chi* != chi and
        // chi composed with sigma^2 differs, so the beta slot must close.
        let s = FiniteSemigroup::from_table(&[
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ])
        .unwrap();
        let sigma = Automorphism::new(&s, vec![0, 2, 3, 1]).unwrap();
        let weights = enumerate_weights(&s, &sigma);
        let one = weights
            .into_iter()
            .find(|w| (0..4).all(|x| w.value(x).is_one()))
            .unwrap();
        let ctx = WilsonContext::new(s, one);
        let chi = chi_of(&ctx, int_map(&[1, 1, -1, -1]));
        assert_eq!(
            build_case2(&ctx, &chi, &CycNumber::one(), &CycNumber::one()),
            Err(WilsonError::PreconditionViolated {
                name: "chi_sigma_squared"
            })
        );
        let family = case2_family(&ctx, &chi).unwrap();
        assert_eq!(family.dimension(), 1);
        assert_eq!(family.sigma_sq_invariant, Some(false));
        let oracle = solve_f_given_g(&ctx, &family.g);
        assert_eq!(oracle.nullspace.len(), 1);
        let family_vecs: Vec<Vec<CycNumber>> = family.basis.iter().map(map_vec).collect();
        assert!(spans_equal(&family_vecs, &oracle.nullspace).unwrap());
    }

    #[test]
    fn case3_families() {
        let ctx = unit_p_zero_ctx();
        let chi = chi_of(&ctx, int_map(&[1, 0, 0]));
        let family = build_case3_family(&ctx, &chi).unwrap();
        assert_eq!(family.dimension(), 1); // oddness kills rho under sigma = id
        assert_eq!(family.case3_blocks, Some((1, 0, 0)));

        let ctx = swap_ctx();
        let chi = chi_of(&ctx, int_map(&[1, 0, 0, 0]));
        let family = build_case3_family(&ctx, &chi).unwrap();
        assert_eq!(family.dimension(), 2);
        assert_eq!(family.case3_blocks, Some((1, 0, 1)));
        // the rho member carries rho(q) = -rho(p)
        let rho_member = &family.basis[1];
        assert_eq!(*rho_member.value(2), -&rho_member.value(1).clone());
        let oracle = solve_f_given_g(&ctx, &family.g);
        assert_eq!(oracle.nullspace.len(), 2);
        let family_vecs: Vec<Vec<CycNumber>> = family.basis.iter().map(map_vec).collect();
        assert!(spans_equal(&family_vecs, &oracle.nullspace).unwrap());

        let ctx = c2_ctx();
        let trivial = chi_of(&ctx, int_map(&[1, 1]));
        let family = build_case3_family(&ctx, &trivial).unwrap();
        assert_eq!(family.dimension(), 1); // empty ideal branch
    }

    #[test]
    fn materialize_rejects_zero_and_builds_solutions() {
        let ctx = swap_ctx();
        let chi = chi_of(&ctx, int_map(&[1, 0, 0, 0]));
        let family = build_case3_family(&ctx, &chi).unwrap();
        let zeros = vec![CycNumber::zero(); family.dimension()];
        assert_eq!(
            family.materialize(&zeros),
            Err(WilsonError::PreconditionViolated {
                name: "all_parameters_zero"
            })
        );
        let coeffs = vec![CycNumber::from_ratio(3, 7), CycNumber::from_ratio(-2, 5)];
        let pair = family.materialize(&coeffs).unwrap();
        assert!(ctx.is_solution(&pair.f, &pair.g));
        assert!(pair.f.is_abelian(ctx.semigroup()));
    }

    #[test]
    fn conformance_clean_on_small_contexts() {
        for ctx in [c2_ctx(), null2_ctx(), unit_p_zero_ctx(), c3_inversion_ctx()] {
            let report = conformance_check(&ctx, ConformanceOptions::default());
            assert!(report.pass, "findings: {:?}", report.findings);
            assert!(report.entries.iter().all(|e| e.matched));
            assert!(report.probe.is_some()); // order <= 3 probes automatically
            assert_eq!(report.probe.as_ref().unwrap().unclassified, 0);
        }
        let report = conformance_check(&swap_ctx(), ConformanceOptions::default());
        assert!(report.pass, "findings: {:?}", report.findings);
        assert!(report.probe.is_none()); // order 4 skips the probe by default
    }

    #[test]
    fn probe_value_set_has_thirteen_values() {
        assert_eq!(probe_values().len(), 13);
    }

    #[test]
    fn flipped_twist_breaks_every_family() {
        let base = c2_ctx();
        let ctx = WilsonContext::with_form(
            base.semigroup().clone(),
            base.weight().clone(),
            ResidualForm::FlippedTwist,
        );
        let trivial = chi_of(&ctx, int_map(&[1, 1]));
        assert!(matches!(
            theorem_family(&ctx, &trivial),
            Err(WilsonError::ResidualNonzero { .. })
        ));
        let report = conformance_check(&ctx, ConformanceOptions::default());
        assert!(!report.pass);
    }

    #[test]
    fn identity_suite_on_case2_pair() {
        let ctx = c3_inversion_ctx();
        let omega = CycNumber::root_of_unity(1, 3).unwrap();
        let chi = chi_of(
            &ctx,
            ComplexValuedMap::new(vec![CycNumber::one(), omega.clone(), &omega * &omega]),
        );
        let pair = build_case2(&ctx, &chi, &CycNumber::one(), &CycNumber::from_integer(2))
            .unwrap();
        let report = identity_suite(&ctx, &pair);
        assert!(report.all_good(), "{:?}", report.parts);
        assert_eq!(report.parts[0], PartStatus::Holds);
        assert_eq!(report.parts[1], PartStatus::Holds);
        assert_eq!(report.parts[2], PartStatus::Holds);
        // C3 is commutative so f is central and the dependence claim applies
        assert_eq!(report.parts[3], PartStatus::Holds);
        assert_eq!(report.parts[4], PartStatus::HypothesisNotMet);
    }

    #[test]
    fn identity_suite_on_case3_rho_pair() {
        let ctx = swap_ctx();
        let chi = chi_of(&ctx, int_map(&[1, 0, 0, 0]));
        let family = build_case3_family(&ctx, &chi).unwrap();
        let coeffs = vec![CycNumber::zero(), CycNumber::one()];
        let pair = family.materialize(&coeffs).unwrap();
        let report = identity_suite(&ctx, &pair);
        assert!(report.all_good(), "{:?}", report.parts);
        // g = chi is multiplicative, so the h representation must exist
        assert_eq!(report.parts[5], PartStatus::Holds);
    }

    #[test]
    fn identity_suite_on_zero_f() {
        let ctx = c2_ctx();
        let pair = SolutionPair {
            f: ComplexValuedMap::zero(2),
            g: int_map(&[2, 3]),
            tag: CaseTag::Case1,
        };
        let report = identity_suite(&ctx, &pair);
        assert_eq!(report.parts[0], PartStatus::Holds);
        assert_eq!(report.parts[1], PartStatus::Holds);
        assert_eq!(report.parts[2], PartStatus::Holds);
    }

    #[test]
    fn context_id_is_stable_and_distinguishes() {
        let a = c2_ctx();
        let b = c2_ctx();
        assert_eq!(a.context_id(), b.context_id());
        assert_ne!(a.context_id(), null2_ctx().context_id());
    }
}
