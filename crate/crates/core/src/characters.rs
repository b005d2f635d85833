//! Multiplicative functions, admissible weights, the star involution-like
//! transform, zero-set decompositions, and additive function spaces.
//!
//! A multiplicative function on a finite semigroup takes each nonzero value
//! in the group of roots of unity whose order divides the eventual period of
//! its element, and its zero set is a two-sided ideal with subsemigroup
//! complement. Enumeration walks exactly those zero sets and exponent
//! assignments, which makes it complete; a 2^n brute-force cross-check for
//! small orders lives in the tests.

use crate::cyclotomic::{CycNumber, Rational};
use crate::linalg::{solve_linear, LinearSystem};
use crate::semigroup::{
    is_abelian, is_central, product_set, Automorphism, ElementSubset, FiniteSemigroup,
};
use num_integer::Integer;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CharacterError {
    #[error("map length {found} does not match semigroup order {expected}")]
    LengthMismatch { found: usize, expected: usize },
    #[error("map is not multiplicative: fails at ({x}, {y})")]
    NotMultiplicative { x: usize, y: usize },
    #[error("weight is not admissible: mu(x * sigma(x)) != 1 at x = {x}")]
    NotAdmissible { x: usize },
    #[error("weight vanishes at {x}")]
    ZeroWeightValue { x: usize },
    #[error("the zero character admits no decomposition")]
    ZeroCharacter,
    #[error("domain is not closed under products: ({x}, {y}) leaves it")]
    DomainNotClosedUnderProduct { x: usize, y: usize },
    #[error("domain is not closed under sigma: {x} leaves it")]
    DomainNotClosedUnderSigma { x: usize },
}

/// A complex-valued function on the elements of a semigroup, stored as one
/// exact cyclotomic value per element index.
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexValuedMap {
    values: Vec<CycNumber>,
}

impl ComplexValuedMap {
    pub fn new(values: Vec<CycNumber>) -> Self {
        ComplexValuedMap { values }
    }

    pub fn zero(n: usize) -> Self {
        ComplexValuedMap {
            values: vec![CycNumber::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, x: usize) -> &CycNumber {
        &self.values[x]
    }

    pub fn values(&self) -> &[CycNumber] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &ComplexValuedMap) -> ComplexValuedMap {
        ComplexValuedMap {
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ComplexValuedMap) -> ComplexValuedMap {
        ComplexValuedMap {
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &CycNumber) -> ComplexValuedMap {
        ComplexValuedMap {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> ComplexValuedMap {
        ComplexValuedMap {
            values: self.values.iter().map(|v| v.scale(r)).collect(),
        }
    }

    /// `x -> self(sigma(x))`.
    pub fn compose_perm(&self, sigma: &Automorphism) -> ComplexValuedMap {
        ComplexValuedMap {
            values: (0..self.values.len())
                .map(|x| self.values[sigma.apply(x)].clone())
                .collect(),
        }
    }

    pub fn is_central(&self, s: &FiniteSemigroup) -> bool {
        is_central(s, &self.values)
    }

    pub fn is_abelian(&self, s: &FiniteSemigroup) -> bool {
        is_abelian(s, &self.values)
    }

    pub fn to_text_vec(&self) -> Vec<String> {
        self.values.iter().map(|v| v.to_text()).collect()
    }
}

/// A validated multiplicative function `chi(xy) = chi(x) chi(y)`.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiplicativeFunction {
    map: ComplexValuedMap,
}

impl MultiplicativeFunction {
    pub fn new(s: &FiniteSemigroup, map: ComplexValuedMap) -> Result<Self, CharacterError> {
        if map.len() != s.order() {
            return Err(CharacterError::LengthMismatch {
                found: map.len(),
                expected: s.order(),
            });
        }
        for x in 0..s.order() {
            for y in 0..s.order() {
                if *map.value(s.mul(x, y)) != map.value(x) * map.value(y) {
                    return Err(CharacterError::NotMultiplicative { x, y });
                }
            }
        }
        Ok(MultiplicativeFunction { map })
    }

    pub fn as_map(&self) -> &ComplexValuedMap {
        &self.map
    }

    pub fn into_map(self) -> ComplexValuedMap {
        self.map
    }

    pub fn value(&self, x: usize) -> &CycNumber {
        self.map.value(x)
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    pub fn zero_set(&self) -> ElementSubset {
        ElementSubset::new(
            self.map.len(),
            (0..self.map.len()).filter(|&x| self.map.value(x).is_zero()),
        )
        .expect("indices are in range")
    }
}

/// A multiplicative weight `mu` together with the automorphism it is
/// admissible for: `mu(x * sigma(x)) = 1` at every `x`, which forces `mu` to
/// be nowhere zero.
#[derive(Clone, PartialEq, Debug)]
pub struct AdmissibleWeight {
    mu: MultiplicativeFunction,
    sigma: Automorphism,
}

impl AdmissibleWeight {
    pub fn new(
        s: &FiniteSemigroup,
        sigma: Automorphism,
        map: ComplexValuedMap,
    ) -> Result<Self, CharacterError> {
        let mu = MultiplicativeFunction::new(s, map)?;
        for x in 0..s.order() {
            let xs = s.mul(x, sigma.apply(x));
            if !mu.value(xs).is_one() {
                return Err(CharacterError::NotAdmissible { x });
            }
        }
        if let Some(x) = (0..s.order()).find(|&x| mu.value(x).is_zero()) {
            return Err(CharacterError::ZeroWeightValue { x });
        }
        Ok(AdmissibleWeight { mu, sigma })
    }

    pub fn value(&self, x: usize) -> &CycNumber {
        self.mu.value(x)
    }

    pub fn as_function(&self) -> &MultiplicativeFunction {
        &self.mu
    }

    pub fn sigma(&self) -> &Automorphism {
        &self.sigma
    }
}

/// `h*(x) = mu(x) h(sigma(x))`. Applying it twice gives
/// `mu(x) mu(sigma(x)) h(sigma^2(x))`, not `h` in general, because `sigma`
/// is not assumed involutive.
pub fn star(h: &ComplexValuedMap, weight: &AdmissibleWeight) -> ComplexValuedMap {
    let sigma = weight.sigma();
    ComplexValuedMap::new(
        (0..h.len())
            .map(|x| weight.value(x) * h.value(sigma.apply(x)))
            .collect(),
    )
}

pub fn even_part(h: &ComplexValuedMap, weight: &AdmissibleWeight) -> ComplexValuedMap {
    let half = Rational::new(1.into(), 2.into());
    h.add(&star(h, weight)).scale_rational(&half)
}

pub fn odd_part(h: &ComplexValuedMap, weight: &AdmissibleWeight) -> ComplexValuedMap {
    let half = Rational::new(1.into(), 2.into());
    h.sub(&star(h, weight)).scale_rational(&half)
}

/// The star of a multiplicative function is again multiplicative.
pub fn star_character(
    s: &FiniteSemigroup,
    chi: &MultiplicativeFunction,
    weight: &AdmissibleWeight,
) -> MultiplicativeFunction {
    MultiplicativeFunction::new(s, star(chi.as_map(), weight))
        .expect("star of a multiplicative function stays multiplicative")
}

/// Least common multiple of all element periods; every nonzero value of a
/// multiplicative function is an `M`-th root of unity.
pub fn period_lcm(s: &FiniteSemigroup) -> u32 {
    (0..s.order())
        .map(|x| s.element_period(x) as u32)
        .fold(1u32, |acc, p| (acc as u64).lcm(&(p as u64)) as u32)
}

fn is_ideal_with_subsemigroup_complement(s: &FiniteSemigroup, members: u32) -> bool {
    let n = s.order();
    let inside = |x: usize| members >> x & 1 == 1;
    for x in 0..n {
        for y in 0..n {
            let p = s.mul(x, y);
            if (inside(x) || inside(y)) && !inside(p) {
                return false; // not a two-sided ideal
            }
            if !inside(x) && !inside(y) && inside(p) {
                return false; // complement not a subsemigroup
            }
        }
    }
    true
}

/// Every multiplicative function on `s`, zero map first, then ordered by
/// zero-set bitmask and exponent vector. Complete: zero sets range over all
/// proper ideals with subsemigroup complement (including the empty set), and
/// nonzero values over the admissible root-of-unity exponents per element.
pub fn enumerate_multiplicative(s: &FiniteSemigroup) -> Vec<MultiplicativeFunction> {
    let n = s.order();
    let m = period_lcm(s);
    let periods: Vec<u32> = (0..n).map(|x| s.element_period(x) as u32).collect();

    let mut out = vec![MultiplicativeFunction::new(s, ComplexValuedMap::zero(n))
        .expect("zero map is multiplicative")];

    for mask in 0u32..1 << n {
        if mask == (1 << n) - 1 {
            continue; // the all-zero map is listed separately
        }
        if !is_ideal_with_subsemigroup_complement(s, mask) {
            continue;
        }
        let complement: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 0).collect();
        // exponents are taken at scale M: element x uses zeta_M^(e * M/p_x),
        // so multiplicativity is an exact congruence on exponents mod M
        let mut exps = vec![0u32; complement.len()];
        enumerate_exponents(s, m, &periods, &complement, &mut exps, 0, &mut |exps| {
            let mut values = vec![CycNumber::zero(); n];
            for (i, &x) in complement.iter().enumerate() {
                let e = (exps[i] * (m / periods[x])) as i64;
                values[x] = CycNumber::root_of_unity(e, m).expect("conductor under cap");
            }
            let chi = MultiplicativeFunction::new(s, ComplexValuedMap::new(values))
                .expect("exponent filter guarantees multiplicativity");
            out.push(chi);
        });
    }
    out
}

fn enumerate_exponents(
    s: &FiniteSemigroup,
    m: u32,
    periods: &[u32],
    complement: &[usize],
    exps: &mut [u32],
    depth: usize,
    emit: &mut impl FnMut(&[u32]),
) {
    if depth == complement.len() {
        emit(exps);
        return;
    }
    let pos_of = |x: usize| complement.iter().position(|&c| c == x);
    for e in 0..periods[complement[depth]] {
        exps[depth] = e;
        // prune: all products among assigned elements must agree mod M
        let scaled = |i: usize| exps[i] * (m / periods[complement[i]]);
        let ok = (0..=depth).all(|i| {
            (0..=depth).all(|j| {
                let p = s.mul(complement[i], complement[j]);
                match pos_of(p) {
                    Some(k) if k <= depth => {
                        (scaled(i) + scaled(j)) % m == scaled(k) % m
                    }
                    Some(_) => true,
                    None => unreachable!("complement is a subsemigroup"),
                }
            })
        });
        if ok {
            enumerate_exponents(s, m, periods, complement, exps, depth + 1, emit);
        }
    }
}

/// Admissible weights for `(s, sigma)`: the multiplicative functions passing
/// the `mu(x * sigma(x)) = 1` filter.
pub fn enumerate_weights(s: &FiniteSemigroup, sigma: &Automorphism) -> Vec<AdmissibleWeight> {
    enumerate_multiplicative(s)
        .into_iter()
        .filter_map(|chi| AdmissibleWeight::new(s, sigma.clone(), chi.into_map()).ok())
        .collect()
}

/// The zero-set decomposition attached to a nonzero multiplicative `chi`:
/// the ideal `I`, its square `I^2`, the layer `P` of `I \ I^2` elements whose
/// translates by the complement stay in `I \ I^2`, and the complement itself.
#[derive(Clone, PartialEq, Debug)]
pub struct ChiDecomposition {
    pub i_chi: ElementSubset,
    pub i_chi_sq: ElementSubset,
    pub p_chi: ElementSubset,
    pub complement: ElementSubset,
}

pub fn chi_decompose(
    s: &FiniteSemigroup,
    chi: &MultiplicativeFunction,
) -> Result<ChiDecomposition, CharacterError> {
    if chi.is_zero() {
        return Err(CharacterError::ZeroCharacter);
    }
    let i_chi = chi.zero_set();
    let complement = i_chi.complement();
    let i_chi_sq = product_set(s, &i_chi);
    debug_assert!(i_chi_sq.is_subset_of(&i_chi));

    let layer = i_chi.difference(&i_chi_sq); // I \ I^2
    let in_layer = |x: usize| layer.contains(x);
    let p_members: Vec<usize> = layer
        .iter()
        .filter(|&p| {
            complement.iter().all(|u| in_layer(s.mul(u, p)))
                && complement.iter().all(|v| in_layer(s.mul(p, v)))
                && complement.iter().all(|u| {
                    complement
                        .iter()
                        .all(|v| in_layer(s.mul(s.mul(u, p), v)))
                })
        })
        .collect();
    let p_chi = ElementSubset::new(s.order(), p_members).expect("indices are in range");

    Ok(ChiDecomposition {
        i_chi,
        i_chi_sq,
        p_chi,
        complement,
    })
}

/// Whether `P_chi` is closed under products of its own elements. Computed for
/// reporting only; no structural claim depends on it.
pub fn p_chi_product_closure(s: &FiniteSemigroup, dec: &ChiDecomposition) -> bool {
    dec.p_chi
        .iter()
        .all(|a| dec.p_chi.iter().all(|b| dec.p_chi.contains(s.mul(a, b))))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Lemma32Status {
    HypothesisNotMet,
    Pass,
    Fail { witness: usize },
}

/// When `chi` is sigma-invariant, `sigma` must preserve both `P_chi` and
/// `I_chi \ P_chi`. Reported, with the hypothesis checked first.
pub fn lemma32_check(
    s: &FiniteSemigroup,
    chi: &MultiplicativeFunction,
    sigma: &Automorphism,
) -> Result<Lemma32Status, CharacterError> {
    let dec = chi_decompose(s, chi)?;
    let composed = chi.as_map().compose_perm(sigma);
    if composed != *chi.as_map() {
        return Ok(Lemma32Status::HypothesisNotMet);
    }
    for p in dec.p_chi.iter() {
        if !dec.p_chi.contains(sigma.apply(p)) {
            return Ok(Lemma32Status::Fail { witness: p });
        }
    }
    for x in dec.i_chi.difference(&dec.p_chi).iter() {
        let sx = sigma.apply(x);
        if !dec.i_chi.contains(sx) || dec.p_chi.contains(sx) {
            return Ok(Lemma32Status::Fail { witness: x });
        }
    }
    Ok(Lemma32Status::Pass)
}

/// Rational solution space of `A(xy) = A(x) + A(y)` on a product-closed
/// domain, with the sigma-odd subspace `A(sigma(x)) = -A(x)` alongside when
/// an automorphism is supplied. On finite semigroups every element has a
/// torsion power relation, so these spaces are expected to be trivial; the
/// computation does not assume it.
#[derive(Clone, PartialEq, Debug)]
pub struct AdditiveSpace {
    pub domain: ElementSubset,
    /// Basis vectors aligned with `domain.as_sorted_vec()`.
    pub basis: Vec<Vec<Rational>>,
    pub sigma_odd_basis: Option<Vec<Vec<Rational>>>,
}

impl AdditiveSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn sigma_odd_dimension(&self) -> Option<usize> {
        self.sigma_odd_basis.as_ref().map(|b| b.len())
    }
}

pub fn additive_space(
    s: &FiniteSemigroup,
    domain: &ElementSubset,
    sigma: Option<&Automorphism>,
) -> Result<AdditiveSpace, CharacterError> {
    let elements = domain.as_sorted_vec();
    for &x in &elements {
        for &y in &elements {
            if !domain.contains(s.mul(x, y)) {
                return Err(CharacterError::DomainNotClosedUnderProduct { x, y });
            }
        }
    }
    if let Some(sig) = sigma {
        for &x in &elements {
            if !domain.contains(sig.apply(x)) {
                return Err(CharacterError::DomainNotClosedUnderSigma { x });
            }
        }
    }
    let idx = |x: usize| elements.iter().position(|&e| e == x).unwrap();
    let k = elements.len();
    let mut rows: Vec<Vec<CycNumber>> = Vec::new();
    for &x in &elements {
        for &y in &elements {
            let mut row = vec![CycNumber::zero(); k];
            row[idx(s.mul(x, y))] = &row[idx(s.mul(x, y))] + &CycNumber::one();
            row[idx(x)] = &row[idx(x)] - &CycNumber::one();
            row[idx(y)] = &row[idx(y)] - &CycNumber::one();
            rows.push(row);
        }
    }
    let basis = rational_nullspace(rows.clone(), k);
    let sigma_odd_basis = match sigma {
        None => None,
        Some(sig) => {
            let mut odd_rows = rows;
            for &x in &elements {
                let mut row = vec![CycNumber::zero(); k];
                row[idx(sig.apply(x))] = &row[idx(sig.apply(x))] + &CycNumber::one();
                row[idx(x)] = &row[idx(x)] + &CycNumber::one();
                odd_rows.push(row);
            }
            Some(rational_nullspace(odd_rows, k))
        }
    };
    Ok(AdditiveSpace {
        domain: domain.clone(),
        basis,
        sigma_odd_basis,
    })
}

fn rational_nullspace(rows: Vec<Vec<CycNumber>>, k: usize) -> Vec<Vec<Rational>> {
    if k == 0 {
        return Vec::new();
    }
    let sys = LinearSystem::homogeneous(if rows.is_empty() {
        vec![vec![CycNumber::zero(); k]]
    } else {
        rows
    })
    .expect("rows are rectangular by construction");
    let space = solve_linear(&sys).expect("well-formed system");
    space
        .nullspace
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|c| {
                    c.as_rational()
                        .expect("integer constraint matrix has rational nullspace")
                })
                .collect()
        })
        .collect()
}
