//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! A [`CycNumber`] stores a conductor `N` and the coordinates of the value in
//! the power basis `1, zeta_N, ..., zeta_N^(phi(N)-1)`, always fully reduced
//! modulo the `N`-th cyclotomic polynomial. Two values with different
//! conductors are compared (and combined) after promoting both into
//! `Q(zeta_L)` with `L = lcm` of the conductors; a promoted value reduces back
//! to the same coordinates, so equality is representation-independent.
//!
//! Rational coordinates use `num_rational::BigRational`, which keeps every
//! fraction reduced with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

pub type Rational = BigRational;

/// Largest conductor the public constructors accept by default. Large enough
/// for every root of unity arising from semigroups of order <= 5 together
/// with the fourth roots used by value-set probes.
pub const DEFAULT_CONDUCTOR_CAP: u32 = 64;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CycError {
    #[error("conductor {requested} exceeds cap {cap}")]
    CapExceeded { requested: u32, cap: u32 },
    #[error("division by zero in a cyclotomic field")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot parse cyclotomic literal {input:?}: {message}")]
    Parse { input: String, message: String },
}

pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut phi = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi as usize
}

fn divisors(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for d in 1..=n {
        if n % d == 0 {
            out.push(d);
        }
    }
    out
}

// ---- integer polynomial helpers (little-endian coefficient vectors) ----

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Exact division of integer polynomials; the divisor must be monic and the
/// division must leave no remainder. Used only for cyclotomic polynomials.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(rem.len() >= den.len());
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for (i, di) in den.iter().enumerate() {
                rem[k + i] -= &c * di;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

fn phi_table() -> &'static Mutex<BTreeMap<u32, Vec<BigInt>>> {
    static TABLE: OnceLock<Mutex<BTreeMap<u32, Vec<BigInt>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// `Phi_n` without the conductor cap, memoized. Private: arithmetic inside
/// already-constructed fields must not be blocked by the cap.
fn cyclotomic_poly_uncapped(n: u32) -> Vec<BigInt> {
    if let Some(p) = phi_table().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    let mut xn_minus_1 = vec![BigInt::zero(); n as usize + 1];
    xn_minus_1[0] = -BigInt::one();
    xn_minus_1[n as usize] = BigInt::one();
    let mut den = vec![BigInt::one()];
    for d in divisors(n) {
        if d < n {
            den = int_poly_mul(&den, &cyclotomic_poly_uncapped(d));
        }
    }
    let phi = int_poly_div_exact(&xn_minus_1, &den);
    debug_assert_eq!(phi.len(), euler_phi(n) + 1);
    phi_table().lock().unwrap().insert(n, phi.clone());
    phi
}

/// The `n`-th cyclotomic polynomial as little-endian integer coefficients.
pub fn cyclotomic_polynomial(n: u32) -> Result<Vec<BigInt>, CycError> {
    cyclotomic_polynomial_capped(n, DEFAULT_CONDUCTOR_CAP)
}

pub fn cyclotomic_polynomial_capped(n: u32, cap: u32) -> Result<Vec<BigInt>, CycError> {
    if n == 0 || n > cap {
        return Err(CycError::CapExceeded { requested: n, cap });
    }
    Ok(cyclotomic_poly_uncapped(n))
}

// ---- rational polynomial reduction modulo Phi_n ----

/// Reduces a little-endian rational polynomial in `zeta_n` modulo `Phi_n` and
/// pads the result to exactly `phi(n)` coordinates.
fn reduce_mod_phi(mut coeffs: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_poly_uncapped(n);
    let deg = phi.len() - 1; // = euler_phi(n)
    while coeffs.len() > deg {
        let top = coeffs.pop().unwrap();
        if !top.is_zero() {
            let k = coeffs.len() - deg;
            for (i, pi) in phi.iter().take(deg).enumerate() {
                let delta = &top * Rational::from(pi.clone());
                coeffs[k + i] -= delta;
            }
        }
    }
    coeffs.resize(deg, Rational::zero());
    coeffs
}

/// An element of `Q(zeta_N)` in reduced power-basis coordinates.
#[derive(Clone)]
pub struct CycNumber {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycNumber {
    pub fn new(conductor: u32, coeffs: Vec<Rational>) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        CycNumber {
            conductor,
            coeffs: reduce_mod_phi(coeffs, conductor),
        }
    }

    pub fn zero() -> Self {
        CycNumber::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        CycNumber::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycNumber {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_integer(k: i64) -> Self {
        CycNumber::from_rational(Rational::from(BigInt::from(k)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0);
        CycNumber::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The exact root of unity `zeta_n^k` (any integer `k`, reduced mod `n`).
    pub fn root_of_unity(k: i64, n: u32) -> Result<Self, CycError> {
        if n == 0 || n > DEFAULT_CONDUCTOR_CAP {
            return Err(CycError::CapExceeded {
                requested: n,
                cap: DEFAULT_CONDUCTOR_CAP,
            });
        }
        let e = k.rem_euclid(n as i64) as usize;
        let mut coeffs = vec![Rational::zero(); e + 1];
        coeffs[e] = Rational::one();
        Ok(CycNumber::new(n, coeffs))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `Some(q)` when the value lies in `Q`. In reduced coordinates a rational
    /// occupies only the constant coordinate, so this is a direct test.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the value in `Q(zeta_m)`; `m` must be a multiple of the
    /// current conductor.
    pub fn promote(&self, m: u32) -> CycNumber {
        assert!(
            m % self.conductor == 0,
            "promotion target {m} is not a multiple of conductor {}",
            self.conductor
        );
        if m == self.conductor {
            return self.clone();
        }
        let t = (m / self.conductor) as usize;
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() - 1) * t + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * t] = c.clone();
        }
        CycNumber::new(m, coeffs)
    }

    fn aligned(&self, other: &CycNumber) -> (CycNumber, CycNumber, u32) {
        let m = (self.conductor as u64).lcm(&(other.conductor as u64)) as u32;
        (self.promote(m), other.promote(m), m)
    }

    pub fn scale(&self, r: &Rational) -> CycNumber {
        CycNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn inv(&self) -> Result<CycNumber, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        // Extended Euclid in Q[x] against Phi_N: s*a + t*Phi = 1, so s is the
        // inverse of a in Q(zeta_N). Phi_N is irreducible over Q, hence the
        // gcd with any nonzero reduced element is 1.
        let phi: Vec<Rational> = cyclotomic_poly_uncapped(self.conductor)
            .into_iter()
            .map(Rational::from)
            .collect();
        let (g, s, _) = poly_ext_gcd(&self.coeffs, &phi);
        let lead = g.last().cloned().unwrap_or_else(Rational::zero);
        assert!(
            g.len() == 1 && !lead.is_zero(),
            "cyclotomic polynomial must be coprime to a nonzero element"
        );
        let inv_lead = Rational::one() / lead;
        let coeffs: Vec<Rational> = s.iter().map(|c| c * &inv_lead).collect();
        let out = CycNumber::new(self.conductor, coeffs);
        debug_assert!((&out * self).is_one());
        Ok(out)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn pow(&self, mut e: u32) -> CycNumber {
        let mut base = self.clone();
        let mut acc = CycNumber::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Serializes as `N:c0,c1,...` with every coordinate in `p/q` form.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect();
        format!("{}:{}", self.conductor, body.join(","))
    }

    pub fn from_text(text: &str) -> Result<Self, CycError> {
        let err = |message: &str| CycError::Parse {
            input: text.to_string(),
            message: message.to_string(),
        };
        let (head, body) = text.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let conductor: u32 = head.trim().parse().map_err(|_| err("bad conductor"))?;
        if conductor == 0 {
            return Err(err("conductor must be positive"));
        }
        let mut coeffs = Vec::new();
        for part in body.split(',') {
            let part = part.trim();
            let r = match part.split_once('/') {
                Some((p, q)) => {
                    let p: BigInt = p.trim().parse().map_err(|_| err("bad numerator"))?;
                    let q: BigInt = q.trim().parse().map_err(|_| err("bad denominator"))?;
                    if q.is_zero() {
                        return Err(err("zero denominator"));
                    }
                    Rational::new(p, q)
                }
                None => {
                    let p: BigInt = part.parse().map_err(|_| err("bad coordinate"))?;
                    Rational::from(p)
                }
            };
            coeffs.push(r);
        }
        if coeffs.len() != euler_phi(conductor) {
            return Err(err("coordinate count must equal phi(conductor)"));
        }
        Ok(CycNumber::new(conductor, coeffs))
    }
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNumber {}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc({})", self.to_text())
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::ops::Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        let (a, b, m) = self.aligned(rhs);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        CycNumber {
            conductor: m,
            coeffs,
        }
    }
}

impl std::ops::Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        let (a, b, m) = self.aligned(rhs);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x - y)
            .collect();
        CycNumber {
            conductor: m,
            coeffs,
        }
    }
}

impl std::ops::Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        let (a, b, m) = self.aligned(rhs);
        let mut coeffs = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    coeffs[i + j] += x * y;
                }
            }
        }
        CycNumber::new(m, coeffs)
    }
}

impl std::ops::Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// `(gcd, s, t)` with `s*a + t*b = gcd` over `Q[x]`; the gcd is not
/// normalized. Little-endian dense vectors, no trailing zeros.
fn poly_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
        v
    }
    fn is_zero_poly(v: &[Rational]) -> bool {
        v.iter().all(|c| c.is_zero())
    }
    fn sub_scaled(a: &[Rational], b: &[Rational], c: &Rational, shift: usize) -> Vec<Rational> {
        let mut out = a.to_vec();
        if out.len() < b.len() + shift {
            out.resize(b.len() + shift, Rational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            let delta = c * bi;
            out[i + shift] -= delta;
        }
        trim(out)
    }

    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0 = vec![Rational::one()];
    let mut s1 = vec![Rational::zero()];
    let mut t0 = vec![Rational::zero()];
    let mut t1 = vec![Rational::one()];
    while !is_zero_poly(&r1) {
        // one long-division step at a time keeps the bookkeeping simple
        if r0.len() < r1.len() {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
            std::mem::swap(&mut t0, &mut t1);
            continue;
        }
        let shift = r0.len() - r1.len();
        let c = r0.last().unwrap() / r1.last().unwrap();
        r0 = sub_scaled(&r0, &r1, &c, shift);
        s0 = sub_scaled(&s0, &s1, &c, shift);
        t0 = sub_scaled(&t0, &t1, &c, shift);
        if is_zero_poly(&r0) || r0.len() < r1.len() {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
            std::mem::swap(&mut t0, &mut t1);
        }
    }
    (r0, s0, t0)
}
