//! Cayley-table text input, the versioned JSON report document, and the
//! exhaustive small-order catalog built on top of the conformance checker.
//!
//! Reports are deterministic byte for byte: object keys are sorted by the
//! JSON writer, vectors follow enumeration order, and all scalars are exact
//! text forms. Files are written atomically (temp file + rename).

use crate::characters::{
    chi_decompose, enumerate_multiplicative, enumerate_weights, p_chi_product_closure,
    star_character, ComplexValuedMap,
};
use crate::continuous::SampledCheck;
use crate::cyclotomic::{CycNumber, Rational};
use crate::linalg::spans_equal;
use crate::semigroup::{
    canonical_form, enumerate_automorphisms, enumerate_semigroups_capped, AlgebraError,
    FiniteSemigroup, DEFAULT_ORDER_CAP,
};
use crate::wilson::{
    conformance_check, solve_f_given_g, theorem_family, CaseTag, ConformanceOptions,
    ConformanceReport, ProbeMode, SolutionFamily, WilsonContext,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

pub const SCHEMA_VERSION: u32 = 1;
/// Enumeration past this order is refused even with the unlock flag.
pub const EXTENDED_ORDER_CAP: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("invalid scalar '{text}': {message}")]
    Scalar { text: String, message: String },
    #[error("schema version mismatch: found {found}, expected {expected}")]
    SchemaMismatch { found: u32, expected: u32 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("report is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn parse_err(line: usize, col: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::Parse {
        line,
        col,
        message: message.into(),
    }
}

/// Tokens per significant line as (line number, [(column, token)]), both
/// 1-based; '#' starts a comment, blank lines are skipped.
fn significant_lines(text: &str) -> Vec<(usize, Vec<(usize, &str)>)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut toks = Vec::new();
        let mut start = None;
        for (idx, ch) in content.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    toks.push((s + 1, &content[s..idx]));
                }
            } else if start.is_none() {
                start = Some(idx);
            }
        }
        if let Some(s) = start {
            toks.push((s + 1, &content[s..]));
        }
        if !toks.is_empty() {
            out.push((i + 1, toks));
        }
    }
    out
}

/// Reads a Cayley table: one line with the order n, then n lines of n
/// 0-based element indices. Associativity is checked on construction.
pub fn load_cayley(text: &str) -> Result<FiniteSemigroup, CatalogError> {
    let lines = significant_lines(text);
    let after_end = text.lines().count() + 1;
    let mut it = lines.into_iter();

    let (order_line, order_toks) = it
        .next()
        .ok_or_else(|| parse_err(after_end, 1, "missing order line"))?;
    if order_toks.len() > 1 {
        return Err(parse_err(
            order_line,
            order_toks[1].0,
            "expected a single order value",
        ));
    }
    let (col, tok) = order_toks[0];
    let n: usize = tok
        .parse()
        .map_err(|_| parse_err(order_line, col, format!("expected a number, found '{tok}'")))?;
    if n == 0 {
        return Err(parse_err(order_line, col, "order must be at least 1"));
    }

    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(n);
    for r in 0..n {
        let (line, toks) = it
            .next()
            .ok_or_else(|| parse_err(after_end, 1, format!("expected {n} rows, found {r}")))?;
        if toks.len() != n {
            let (col, msg) = if toks.len() < n {
                let (c, t) = *toks.last().expect("significant lines are non-empty");
                (c + t.len(), format!("row has {} entries, expected {n}", toks.len()))
            } else {
                (toks[n].0, format!("row has {} entries, expected {n}", toks.len()))
            };
            return Err(parse_err(line, col, msg));
        }
        let mut row = Vec::with_capacity(n);
        for (col, tok) in toks {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(line, col, format!("expected a number, found '{tok}'")))?;
            if v >= n {
                return Err(parse_err(
                    line,
                    col,
                    format!("entry {v} is out of range for order {n}"),
                ));
            }
            row.push(v);
        }
        rows.push(row);
    }
    if let Some((line, toks)) = it.next() {
        return Err(parse_err(line, toks[0].0, "unexpected content after the table"));
    }
    Ok(FiniteSemigroup::from_table(&rows)?)
}

/// Scalar literal: either a rational like `-3/2`, or the conductor-prefixed
/// vector form produced by the reports.
pub fn parse_scalar(text: &str) -> Result<CycNumber, CatalogError> {
    let t = text.trim();
    if t.contains(':') {
        CycNumber::from_text(t).map_err(|e| CatalogError::Scalar {
            text: t.to_string(),
            message: e.to_string(),
        })
    } else {
        let r = Rational::from_str(t).map_err(|e| CatalogError::Scalar {
            text: t.to_string(),
            message: e.to_string(),
        })?;
        Ok(CycNumber::from_rational(r))
    }
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// One catalog line: a canonical semigroup with the conformance report of
/// every (sigma, mu) context it admits.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub order: usize,
    pub table: Vec<usize>,
    pub commutative: bool,
    pub automorphism_count: usize,
    pub contexts: Vec<ConformanceReport>,
}

/// Per-character structural summary with explicit element sets.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CharacterAnalysis {
    pub chi: Vec<String>,
    pub zero_set: Vec<usize>,
    pub ideal_square: Vec<usize>,
    pub p_set: Vec<usize>,
    pub complement: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_product_closed: Option<bool>,
    pub star: Vec<String>,
    pub star_equals_chi: bool,
    pub sigma_sq_invariant: bool,
    pub case: CaseTag,
    pub family_dimension: usize,
    pub family_g: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_error: Option<String>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ContextAnalysis {
    pub context_id: String,
    pub sigma: Vec<usize>,
    pub mu: Vec<String>,
    pub characters: Vec<CharacterAnalysis>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub order: usize,
    pub table: Vec<usize>,
    pub commutative: bool,
    pub automorphism_count: usize,
    pub contexts: Vec<ContextAnalysis>,
}

/// Nullspace of f for one fixed g, with the classification attempt.
/// `family_agrees` is the claim the classification makes: the matching
/// family span equals the nullspace, or (no family has this g) the
/// nullspace is trivial. It is absent for g = 0.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SolveEntry {
    pub context_id: String,
    pub g: Vec<String>,
    pub nullspace_dimension: usize,
    pub basis: Vec<Vec<String>>,
    pub case: CaseTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_agrees: Option<bool>,
}

/// Top-level JSON document shared by every command.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub input_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<Vec<CatalogEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Vec<AnalysisReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformance: Option<Vec<ConformanceReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<SolveEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous: Option<Vec<SampledCheck>>,
}

impl ReportDocument {
    pub fn new(input_digest: impl Into<String>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: input_digest.into(),
            catalog: None,
            analysis: None,
            conformance: None,
            solutions: None,
            continuous: None,
        }
    }

    /// True when every section that makes a claim verifies it.
    pub fn overall_pass(&self) -> bool {
        let catalog_ok = self.catalog.iter().flatten().all(|entry| {
            entry.contexts.iter().all(|c| c.pass)
        });
        let conformance_ok = self.conformance.iter().flatten().all(|c| c.pass);
        let solve_ok = self
            .solutions
            .iter()
            .flatten()
            .all(|s| s.family_agrees != Some(false));
        let continuous_ok = self.continuous.iter().flatten().all(|c| c.pass);
        catalog_ok && conformance_ok && solve_ok && continuous_ok
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CatalogOptions {
    pub probe: ProbeMode,
    pub unlock_order_5: bool,
}

fn catalog_entry(s: &FiniteSemigroup, probe: ProbeMode) -> CatalogEntry {
    let autos = enumerate_automorphisms(s);
    let mut contexts = Vec::new();
    for sigma in &autos {
        for weight in enumerate_weights(s, sigma) {
            let ctx = WilsonContext::new(s.clone(), weight);
            contexts.push(conformance_check(&ctx, ConformanceOptions { probe }));
        }
    }
    CatalogEntry {
        order: s.order(),
        table: canonical_form(s),
        commutative: s.is_commutative(),
        automorphism_count: autos.len(),
        contexts,
    }
}

/// Runs the conformance checker over every isomorphism class of order up to
/// `max_order`, every automorphism, and every admissible weight. The default
/// cap is order 4; order 5 needs the unlock flag.
pub fn build_catalog(max_order: usize, opts: CatalogOptions) -> Result<ReportDocument, CatalogError> {
    let cap = if opts.unlock_order_5 {
        EXTENDED_ORDER_CAP
    } else {
        DEFAULT_ORDER_CAP
    };
    if max_order > cap {
        return Err(AlgebraError::LimitExceeded {
            requested: max_order,
            cap,
        }
        .into());
    }
    let mut entries = Vec::new();
    for n in 1..=max_order {
        let reps: Vec<FiniteSemigroup> =
            enumerate_semigroups_capped(n, cap, true)?.collect();
        let mut batch: Vec<CatalogEntry> = reps
            .par_iter()
            .map(|s| catalog_entry(s, opts.probe))
            .collect();
        entries.append(&mut batch);
    }
    let params = format!(
        "catalog;max_order={max_order};collapse=iso;probe={:?}",
        opts.probe
    );
    let mut doc = ReportDocument::new(digest_bytes(params.as_bytes()));
    doc.catalog = Some(entries);
    Ok(doc)
}

pub fn analyze_context(ctx: &WilsonContext) -> ContextAnalysis {
    let s = ctx.semigroup();
    let n = s.order();
    let sigma_sq = ctx.sigma().compose(ctx.sigma());
    let mut characters = Vec::new();
    for chi in enumerate_multiplicative(s) {
        if chi.is_zero() {
            continue;
        }
        let dec = chi_decompose(s, &chi).expect("chi is nonzero");
        let star = star_character(s, &chi, ctx.weight());
        let (case, family_dimension, family_g, family_error) = match theorem_family(ctx, &chi) {
            Ok(f) => (f.tag, f.dimension(), f.g.to_text_vec(), None),
            Err(e) => (CaseTag::Unclassified, 0, Vec::new(), Some(e.to_string())),
        };
        characters.push(CharacterAnalysis {
            chi: chi.as_map().to_text_vec(),
            zero_set: dec.i_chi.as_sorted_vec(),
            ideal_square: dec.i_chi_sq.as_sorted_vec(),
            p_set: dec.p_chi.as_sorted_vec(),
            complement: dec.complement.as_sorted_vec(),
            p_product_closed: (!dec.p_chi.is_empty()).then(|| p_chi_product_closure(s, &dec)),
            star: star.as_map().to_text_vec(),
            star_equals_chi: star == chi,
            sigma_sq_invariant: chi.as_map().compose_perm(&sigma_sq) == *chi.as_map(),
            case,
            family_dimension,
            family_g,
            family_error,
        });
    }
    ContextAnalysis {
        context_id: ctx.context_id(),
        sigma: ctx.sigma().perm().to_vec(),
        mu: (0..n).map(|x| ctx.weight().value(x).to_text()).collect(),
        characters,
    }
}

pub fn analyze_semigroup(s: &FiniteSemigroup) -> AnalysisReport {
    let autos = enumerate_automorphisms(s);
    let mut contexts = Vec::new();
    for sigma in &autos {
        for weight in enumerate_weights(s, sigma) {
            contexts.push(analyze_context(&WilsonContext::new(s.clone(), weight)));
        }
    }
    AnalysisReport {
        order: s.order(),
        table: s.flat_table().to_vec(),
        commutative: s.is_commutative(),
        automorphism_count: autos.len(),
        contexts,
    }
}

fn map_vec(m: &ComplexValuedMap) -> Vec<CycNumber> {
    m.values().to_vec()
}

/// Solves for f at a fixed g and compares against the classified families
/// sharing that g.
pub fn solve_in_context(ctx: &WilsonContext, g: &ComplexValuedMap) -> SolveEntry {
    let space = solve_f_given_g(ctx, g);
    let basis: Vec<Vec<String>> = space
        .nullspace
        .iter()
        .map(|v| v.iter().map(|c| c.to_text()).collect())
        .collect();
    let (case, family_agrees) = if g.is_zero() {
        (CaseTag::HomogeneousG0, None)
    } else {
        let mut matching: Vec<SolutionFamily> = Vec::new();
        for chi in enumerate_multiplicative(ctx.semigroup()) {
            if chi.is_zero() {
                continue;
            }
            if let Ok(fam) = theorem_family(ctx, &chi) {
                if fam.g == *g {
                    matching.push(fam);
                }
            }
        }
        if matching.is_empty() {
            // no family claims this g, so only f = 0 may solve
            (CaseTag::Unclassified, Some(space.nullspace.is_empty()))
        } else {
            let tag = matching[0].tag;
            let merged: Vec<Vec<CycNumber>> = matching
                .iter()
                .flat_map(|f| f.basis.iter().map(map_vec))
                .collect();
            let agrees =
                spans_equal(&merged, &space.nullspace).expect("uniform vector lengths");
            (tag, Some(agrees))
        }
    };
    SolveEntry {
        context_id: ctx.context_id(),
        g: g.to_text_vec(),
        nullspace_dimension: space.nullspace.len(),
        basis,
        case,
        family_agrees,
    }
}

/// Pretty JSON with sorted keys and a trailing newline; byte-deterministic
/// for equal documents.
pub fn report_to_string(doc: &ReportDocument) -> String {
    let value = serde_json::to_value(doc).expect("report serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("json value prints");
    text.push('\n');
    text
}

/// Writes the report atomically: temp file in the target directory, then
/// rename over the destination.
pub fn emit_report(doc: &ReportDocument, path: &Path) -> Result<(), CatalogError> {
    let text = report_to_string(doc);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| CatalogError::Io(e.error))?;
    Ok(())
}

pub fn parse_report(text: &str) -> Result<ReportDocument, CatalogError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let found = value
        .get("schema_version")
        .and_then(|v| v.as_u64())
        .unwrap_or(0) as u32;
    if found != SCHEMA_VERSION {
        return Err(CatalogError::SchemaMismatch {
            found,
            expected: SCHEMA_VERSION,
        });
    }
    Ok(serde_json::from_value(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::Automorphism;

    fn identity_context(s: &FiniteSemigroup) -> WilsonContext {
        let id = Automorphism::identity(s.order());
        let weight = enumerate_weights(s, &id)
            .into_iter()
            .next()
            .expect("the constant weight is admissible");
        WilsonContext::new(s.clone(), weight)
    }

    #[test]
    fn load_cayley_accepts_comments_and_blanks() {
        let text = "# cyclic of order 3\n3\n\n0 1 2\n1 2 0  # row for the generator\n2 0 1\n";
        let s = load_cayley(text).unwrap();
        assert_eq!(s.order(), 3);
        assert_eq!(s.mul(1, 2), 0);
        assert_eq!(s.flat_table(), &[0, 1, 2, 1, 2, 0, 2, 0, 1]);

        assert_eq!(load_cayley("1\n0\n").unwrap().order(), 1);
    }

    #[test]
    fn load_cayley_reports_line_and_column() {
        let out_of_range = load_cayley("2\n0 0\n1 9\n");
        match out_of_range {
            Err(CatalogError::Parse { line, col, .. }) => {
                assert_eq!((line, col), (3, 3));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }

        match load_cayley("2\n0 x\n0 0\n") {
            Err(CatalogError::Parse { line, col, message }) => {
                assert_eq!((line, col), (2, 3));
                assert!(message.contains('x'));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }

        match load_cayley("2\n0\n0 0\n") {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }

        match load_cayley("2\n0 0\n") {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }

        match load_cayley("0\n") {
            Err(CatalogError::Parse { line, col, .. }) => assert_eq!((line, col), (1, 1)),
            other => panic!("expected a parse error, got {other:?}"),
        }

        match load_cayley("2\n0 0\n0 0\n1\n") {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn load_cayley_passes_associativity_through() {
        match load_cayley("2\n1 1\n0 0\n") {
            Err(CatalogError::Algebra(AlgebraError::NotAssociative { .. })) => {}
            other => panic!("expected a non-associative rejection, got {other:?}"),
        }
    }

    #[test]
    fn scalar_literals_parse_both_forms() {
        assert_eq!(parse_scalar("-3/2").unwrap(), CycNumber::from_ratio(-3, 2));
        assert_eq!(parse_scalar("2").unwrap(), CycNumber::from_integer(2));
        let i = CycNumber::root_of_unity(1, 4).unwrap();
        assert_eq!(parse_scalar(&i.to_text()).unwrap(), i);
        assert!(matches!(
            parse_scalar("one"),
            Err(CatalogError::Scalar { .. })
        ));
    }

    #[test]
    fn catalog_of_order_two_is_complete_and_passes() {
        let tiny = build_catalog(1, CatalogOptions::default()).unwrap();
        assert_eq!(tiny.catalog.as_ref().unwrap().len(), 1);
        assert!(tiny.overall_pass());

        let doc = build_catalog(2, CatalogOptions::default()).unwrap();
        let entries = doc.catalog.as_ref().unwrap();
        // 1 class of order 1 plus 5 classes of order 2
        assert_eq!(entries.len(), 6);
        for entry in entries {
            assert!(!entry.contexts.is_empty());
            for ctx in &entry.contexts {
                assert!(ctx.pass, "findings: {:?}", ctx.findings);
                let probe = ctx.probe.as_ref().expect("probe is automatic here");
                assert_eq!(probe.unclassified, 0);
            }
        }
        assert!(doc.overall_pass());
    }

    #[test]
    fn catalog_refuses_orders_past_the_cap() {
        assert!(matches!(
            build_catalog(5, CatalogOptions::default()),
            Err(CatalogError::Algebra(AlgebraError::LimitExceeded {
                requested: 5,
                cap: 4
            }))
        ));
        let unlock = CatalogOptions {
            unlock_order_5: true,
            ..CatalogOptions::default()
        };
        assert!(matches!(
            build_catalog(6, unlock),
            Err(CatalogError::Algebra(AlgebraError::LimitExceeded {
                requested: 6,
                cap: 5
            }))
        ));
    }

    #[test]
    fn reports_are_byte_deterministic_and_round_trip() {
        let opts = CatalogOptions {
            probe: ProbeMode::Off,
            unlock_order_5: false,
        };
        let doc1 = build_catalog(3, opts).unwrap();
        let doc2 = build_catalog(3, opts).unwrap();
        let text1 = report_to_string(&doc1);
        let text2 = report_to_string(&doc2);
        assert_eq!(text1, text2);
        assert!(text1.ends_with('\n'));
        assert_eq!(doc1.catalog.as_ref().unwrap().len(), 30);
        assert!(doc1.overall_pass());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        emit_report(&doc1, &path).unwrap();
        let on_disk = std::fs::read_to_string(&path).unwrap();
        assert_eq!(on_disk, text1);
        let back = parse_report(&on_disk).unwrap();
        assert_eq!(back, doc1);

        // overwriting is atomic and idempotent
        emit_report(&doc2, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text1);
    }

    #[test]
    fn parse_report_rejects_other_schema_versions() {
        let doc = ReportDocument::new("d".to_string());
        let text = report_to_string(&doc).replace(
            "\"schema_version\": 1",
            "\"schema_version\": 99",
        );
        match parse_report(&text) {
            Err(CatalogError::SchemaMismatch { found, expected }) => {
                assert_eq!((found, expected), (99, 1));
            }
            other => panic!("expected a schema mismatch, got {other:?}"),
        }
    }

    #[test]
    fn analysis_lists_the_ideal_decomposition() {
        let s = load_cayley("3\n0 1 2\n1 2 2\n2 2 2\n").unwrap();
        let report = analyze_semigroup(&s);
        assert_eq!(report.automorphism_count, 1);
        assert_eq!(report.contexts.len(), 1);
        let ctx = &report.contexts[0];
        assert_eq!(ctx.characters.len(), 2);
        let nontrivial = ctx
            .characters
            .iter()
            .find(|c| !c.zero_set.is_empty())
            .expect("the unit-p-zero carrier has a vanishing character");
        assert_eq!(nontrivial.zero_set, vec![1, 2]);
        assert_eq!(nontrivial.ideal_square, vec![2]);
        assert_eq!(nontrivial.p_set, vec![1]);
        assert_eq!(nontrivial.complement, vec![0]);
        assert_eq!(nontrivial.p_product_closed, Some(false));
        assert!(nontrivial.star_equals_chi);
        assert!(nontrivial.sigma_sq_invariant);
        assert_eq!(nontrivial.case, CaseTag::Case3);
        assert_eq!(nontrivial.family_dimension, 1);
        assert!(nontrivial.family_error.is_none());

        let trivial = analyze_semigroup(&load_cayley("1\n0\n").unwrap());
        assert_eq!(trivial.contexts.len(), 1);
        assert_eq!(trivial.contexts[0].characters.len(), 1);
        assert!(trivial.contexts[0].characters[0].zero_set.is_empty());
    }

    #[test]
    fn solve_classifies_matching_and_foreign_g() {
        let c2 = FiniteSemigroup::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        let ctx = identity_context(&c2);

        let sign = ComplexValuedMap::new(vec![
            CycNumber::from_integer(1),
            CycNumber::from_integer(-1),
        ]);
        let entry = solve_in_context(&ctx, &sign);
        assert_eq!(entry.nullspace_dimension, 1);
        assert_eq!(entry.case, CaseTag::Case3);
        assert_eq!(entry.family_agrees, Some(true));

        let foreign = ComplexValuedMap::new(vec![
            CycNumber::from_integer(1),
            CycNumber::from_ratio(1, 2),
        ]);
        let entry = solve_in_context(&ctx, &foreign);
        assert_eq!(entry.nullspace_dimension, 0);
        assert_eq!(entry.case, CaseTag::Unclassified);
        assert_eq!(entry.family_agrees, Some(true));

        let null2 = FiniteSemigroup::from_table(&[vec![0, 0], vec![0, 0]]).unwrap();
        let ctx = identity_context(&null2);
        let zero = ComplexValuedMap::zero(2);
        let entry = solve_in_context(&ctx, &zero);
        assert_eq!(entry.case, CaseTag::HomogeneousG0);
        assert_eq!(entry.nullspace_dimension, 1);
        assert_eq!(entry.family_agrees, None);
        assert_eq!(
            entry.basis,
            vec![vec!["1:0/1".to_string(), "1:1/1".to_string()]]
        );
    }
}
