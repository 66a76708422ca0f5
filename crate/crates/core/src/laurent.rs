//! Integer Laurent polynomials and the Alexander-polynomial machinery built on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numtheory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("cannot normalize: p(1) = {0}, expected 1 or -1")]
    NotUnitAtOne(i64),
    #[error("polynomial is not symmetric under t -> 1/t up to a unit")]
    NotSymmetric,
    #[error("zero polynomial")]
    Zero,
    #[error("n must be nonzero")]
    ZeroParameter,
    #[error("trivial Alexander polynomial: realizability reduces to Kondo's theorem and is unsupported")]
    TrivialDelta,
    #[error("determinant {0} is below 3")]
    DeterminantTooSmall(u64),
    #[error("determinant {0} is an odd prime congruent to 3 mod 4; no forbidden residue class exists")]
    NoForbiddenClass(u64),
    #[error("cannot parse polynomial {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// `coeffs[k]` is the coefficient of `t^(min_degree + k)`. Leading and trailing
/// coefficients are nonzero; the zero polynomial has no coefficients and `min_degree == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    min_degree: i64,
    coeffs: Vec<i64>,
}

impl LaurentPoly {
    pub fn new(min_degree: i64, coeffs: Vec<i64>) -> Self {
        let mut p = LaurentPoly { min_degree, coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        LaurentPoly { min_degree: 0, coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn monomial(coeff: i64, degree: i64) -> Self {
        Self::new(degree, vec![coeff])
    }

    /// `n(t + t^-1) + 1 - 2n`, the general breadth-2 Alexander polynomial.
    pub fn breadth_two(n: i64) -> Self {
        Self::new(-1, vec![n, 1 - 2 * n, n])
    }

    fn trim(&mut self) {
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.min_degree = 0;
            }
            Some(i) => {
                let last = self.coeffs.iter().rposition(|&c| c != 0).unwrap();
                self.coeffs.truncate(last + 1);
                self.coeffs.drain(..i);
                self.min_degree += i as i64;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.coeffs.len() as i64 - 1
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: i64) -> i64 {
        let k = degree - self.min_degree;
        if k < 0 {
            return 0;
        }
        self.coeffs.get(k as usize).copied().unwrap_or(0)
    }

    /// Degree span; 0 for constants and for the zero polynomial.
    pub fn breadth(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.coeffs.len() as i64 - 1
        }
    }

    /// Evaluate at an integer point. Negative powers are only defined at `t = ±1`.
    pub fn eval(&self, t: i64) -> i64 {
        assert!(t == 1 || t == -1, "Laurent polynomials are evaluated at t = 1 or t = -1");
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let d = self.min_degree + k as i64;
                if t == -1 && d.rem_euclid(2) == 1 {
                    -c
                } else {
                    c
                }
            })
            .sum()
    }

    /// `p(t) -> p(t^-1)`.
    pub fn reverse(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly { min_degree: -self.max_degree(), coeffs }
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { min_degree: self.min_degree + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.min_degree, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Literally symmetric: `p(t) == p(t^-1)`.
    pub fn is_symmetric(&self) -> bool {
        *self == self.reverse()
    }

    /// Symmetric after multiplication by some `±t^k`.
    pub fn is_symmetric_up_to_unit(&self) -> bool {
        let mut c = self.coeffs.clone();
        c.reverse();
        c == self.coeffs
    }

    /// An Alexander polynomial up to units: symmetric with `p(1) = ±1`.
    pub fn is_admissible(&self) -> bool {
        !self.is_zero()
            && self.breadth() % 2 == 0
            && self.is_symmetric_up_to_unit()
            && self.eval(1).abs() == 1
    }

    /// Multiply by `±t^k` so the result is centered (`p(t) = p(t^-1)`) with `p(1) = 1`.
    pub fn normalize(&self) -> Result<Self, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::Zero);
        }
        let at_one = self.eval(1);
        if at_one.abs() != 1 {
            return Err(LaurentError::NotUnitAtOne(at_one));
        }
        if self.breadth() % 2 != 0 || !self.is_symmetric_up_to_unit() {
            return Err(LaurentError::NotSymmetric);
        }
        let centered = LaurentPoly { min_degree: -self.breadth() / 2, coeffs: self.coeffs.clone() };
        Ok(centered.scale(at_one))
    }

    pub fn determinant(&self) -> u64 {
        self.eval(-1).unsigned_abs()
    }

    /// Exact division; `None` unless `divisor` divides `self` in `Z[t, t^-1]`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d = &divisor.coeffs;
        let lead = *d.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < d.len() {
            return None;
        }
        let qlen = rem.len() - d.len() + 1;
        let mut q = vec![0i64; qlen];
        for i in (0..qlen).rev() {
            let top = rem[i + d.len() - 1];
            if top % lead != 0 {
                return None;
            }
            let c = top / lead;
            q[i] = c;
            if c != 0 {
                for (j, &dj) in d.iter().enumerate() {
                    rem[i + j] -= c * dj;
                }
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(Self::new(self.min_degree - divisor.min_degree, q))
    }

    /// Coefficient-list form `min;c0 c1 ...`, lowest degree first.
    pub fn to_coefficient_list(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{};{}", self.min_degree, cs.join(" "))
    }

    fn parse_coefficient_list(text: &str) -> Result<Self, LaurentError> {
        let err = |reason: &str| LaurentError::Parse { text: text.to_string(), reason: reason.to_string() };
        let (min, rest) = text.split_once(';').ok_or_else(|| err("missing ';'"))?;
        let min: i64 = min.trim().parse().map_err(|_| err("bad minimum degree"))?;
        let coeffs = rest
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<i64>().map_err(|_| err("bad coefficient")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(min, coeffs))
    }

    fn parse_terms(text: &str) -> Result<Self, LaurentError> {
        let err = |reason: String| LaurentError::Parse { text: text.to_string(), reason };
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty".into()));
        }
        // split into signed terms, keeping '-' that follows '^' as part of the exponent
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.char_indices() {
            let after_caret = i > 0 && s[..i].ends_with('^');
            if (ch == '+' || ch == '-') && !cur.is_empty() && !after_caret {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);

        let mut acc = Self::zero();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, term.strip_prefix('+').unwrap_or(&term)),
            };
            if body.is_empty() {
                return Err(err(format!("dangling sign in {term:?}")));
            }
            let (coeff, degree) = match body.find('t') {
                None => (body.parse::<i64>().map_err(|_| err(format!("bad term {term:?}")))?, 0),
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    let c = if c.is_empty() {
                        1
                    } else {
                        c.parse::<i64>().map_err(|_| err(format!("bad coefficient in {term:?}")))?
                    };
                    let tail = &body[pos + 1..];
                    let d = if tail.is_empty() {
                        1
                    } else {
                        let e = tail.strip_prefix('^').ok_or_else(|| err(format!("bad exponent in {term:?}")))?;
                        let e = e.trim_start_matches('(').trim_end_matches(')');
                        e.parse::<i64>().map_err(|_| err(format!("bad exponent in {term:?}")))?
                    };
                    (c, d)
                }
            };
            acc = &acc + &Self::monomial(sign * coeff, degree);
        }
        Ok(acc)
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Accepts either `t^-1 - 1 + t` style or the coefficient-list form `-1;1 -1 1`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if text.contains(';') {
            Self::parse_coefficient_list(text)
        } else {
            Self::parse_terms(text)
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let d = self.min_degree + k as i64;
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match (d, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "t")?,
                (1, m) => write!(f, "{m}t")?,
                (d, 1) => write!(f, "t^{d}")?,
                (d, m) => write!(f, "{m}t^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl<'a> Add for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.min_degree.min(rhs.min_degree);
        let hi = self.max_degree().max(rhs.max_degree());
        let coeffs = (lo..=hi).map(|d| self.coeff(d) + rhs.coeff(d)).collect();
        LaurentPoly::new(lo, coeffs)
    }
}

impl<'a> Sub for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl<'a> Mul for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.min_degree + rhs.min_degree, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Kawauchi's breadth-2 family: `n(t + t^-1) + 1 - 2n` lies in some `S_{p,n,l}`
/// exactly when `1 - 4n` is not a perfect square.
pub fn breadth2_in_kawauchi_family(n: i64) -> Result<bool, LaurentError> {
    if n == 0 {
        return Err(LaurentError::ZeroParameter);
    }
    Ok(!numtheory::is_square(1 - 4 * n))
}

/// Reads off `n` from a breadth-2 admissible polynomial `n(t + t^-1) + 1 - 2n`.
pub fn breadth2_parameter(p: &LaurentPoly) -> Option<i64> {
    let q = p.normalize().ok()?;
    (q.breadth() == 2).then(|| q.coeff(1))
}

/// Witness that `target = sign * (delta * m - r(t) r(t^-1))` with `r(1) = 0`,
/// `m` symmetric and `m(1) = ±1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborCertificate {
    pub r: LaurentPoly,
    pub m: LaurentPoly,
    pub sign: i64,
}

impl NeighborCertificate {
    pub fn verify(&self, delta: &LaurentPoly, target: &LaurentPoly) -> bool {
        let rr = &self.r * &self.r.reverse();
        let rhs = (&(delta * &self.m) - &rr).scale(self.sign);
        (self.sign == 1 || self.sign == -1)
            && self.r.eval(1) == 0
            && self.m.is_symmetric()
            && self.m.eval(1).abs() == 1
            && rhs == *target
    }
}

/// Bounded search for a certificate that `target` is the Alexander polynomial of a knot
/// one crossing change away from a Nakanishi-index-1 knot with polynomial `delta`.
///
/// `r` ranges over polynomials supported in degrees `0..=deg_bound` with coefficients in
/// `[-coeff_bound, coeff_bound]` and `r(1) = 0`, ordered by degree then coefficient vector.
/// For each `r` and sign, `m` is forced by exact division and kept only if it is symmetric,
/// has `m(1) = ±1`, degrees within `[-deg_bound, deg_bound]` and coefficients within the
/// same bound. `Ok(None)` means the box was exhausted, which proves nothing.
pub fn certificate_search(
    delta: &LaurentPoly,
    target: &LaurentPoly,
    deg_bound: usize,
    coeff_bound: i64,
) -> Result<Option<NeighborCertificate>, LaurentError> {
    let delta = delta.normalize()?;
    let target = target.normalize()?;
    if delta.breadth() == 0 {
        return Err(LaurentError::TrivialDelta);
    }
    let coeff_bound = coeff_bound.max(0);
    let m_fits = |m: &LaurentPoly| {
        m.is_zero()
            || (m.min_degree() >= -(deg_bound as i64)
                && m.max_degree() <= deg_bound as i64
                && m.coefficients().iter().all(|c| c.abs() <= coeff_bound))
    };
    let try_r = |r: LaurentPoly| -> Option<NeighborCertificate> {
        let rr = &r * &r.reverse();
        for sign in [1i64, -1] {
            // delta * m = sign * target + r r~
            let lhs = &target.scale(sign) + &rr;
            let Some(m) = lhs.div_exact(&delta) else { continue };
            if m.is_symmetric() && m.eval(1).abs() == 1 && m_fits(&m) {
                let cert = NeighborCertificate { r, m, sign };
                debug_assert!(cert.verify(&delta, &target));
                return Some(cert);
            }
        }
        None
    };

    if let Some(c) = try_r(LaurentPoly::zero()) {
        return Ok(Some(c));
    }
    let base = (2 * coeff_bound + 1) as u64;
    for top in 1..=deg_bound {
        // coefficient vectors of length top + 1, lexicographic, most significant first
        let len = top + 1;
        let Some(count) = base.checked_pow(len as u32) else { break };
        for idx in 0..count {
            let mut v = vec![0i64; len];
            let mut rest = idx;
            for slot in v.iter_mut().rev() {
                *slot = (rest % base) as i64 - coeff_bound;
                rest /= base;
            }
            if v[top] == 0 || v.iter().sum::<i64>() != 0 {
                continue;
            }
            if let Some(c) = try_r(LaurentPoly::new(0, v)) {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// The residue `|d|` such that no Gordian neighbor of a Nakanishi-index-1 knot with
/// determinant `det_k` has determinant congruent to `|d|`.
pub fn forbidden_residue_class(det_k: u64) -> Result<u64, LaurentError> {
    if det_k < 3 {
        return Err(LaurentError::DeterminantTooSmall(det_k));
    }
    numtheory::find_obstructing_d(det_k)
        .ok()
        .flatten()
        .ok_or(LaurentError::NoForbiddenClass(det_k))
}
