//! Quadratic residues modulo odd integers. "Residue" includes 0 throughout.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ModulusError {
    #[error("modulus must be odd and positive, got {0}")]
    NotOddPositive(i64),
    #[error("modulus must be odd and at least 3, got {0}")]
    TooSmall(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidueVerdict {
    pub modulus: u64,
    pub value: u64,
    pub is_residue: bool,
}

fn check_modulus(n: i64) -> Result<u64, ModulusError> {
    if n < 1 || n % 2 == 0 {
        return Err(ModulusError::NotOddPositive(n));
    }
    Ok(n as u64)
}

/// The image of `x -> x^2` on `Z/n`, indexed by residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareSet {
    modulus: u64,
    squares: Vec<bool>,
}

impl SquareSet {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let mut squares = vec![false; n as usize];
        // t and n - t have the same square
        for t in 0..=n / 2 {
            squares[((t as u128 * t as u128) % n as u128) as usize] = true;
        }
        SquareSet { modulus: n, squares }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, a: i64) -> bool {
        self.squares[a.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn verdict(&self, a: i64) -> ResidueVerdict {
        ResidueVerdict {
            modulus: self.modulus,
            value: a.rem_euclid(self.modulus as i64) as u64,
            is_residue: self.contains(a),
        }
    }

    /// Number of nonzero residues.
    pub fn nonzero_count(&self) -> usize {
        self.squares.iter().skip(1).filter(|&&b| b).count()
    }
}

/// Per-modulus square sets shared across a batch. Readers never block each other once a
/// modulus is populated.
#[derive(Debug, Default)]
pub struct ResidueCache {
    sets: RwLock<HashMap<u64, Arc<SquareSet>>>,
}

impl ResidueCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: u64) -> Arc<SquareSet> {
        if let Some(s) = self.sets.read().unwrap().get(&n) {
            return s.clone();
        }
        let set = Arc::new(SquareSet::new(n));
        self.sets.write().unwrap().entry(n).or_insert(set).clone()
    }
}

pub fn is_quadratic_residue(a: i64, n: i64) -> Result<bool, ModulusError> {
    let n = check_modulus(n)?;
    let a = a.rem_euclid(n as i64) as u64;
    Ok((0..=n / 2).any(|t| (t as u128 * t as u128) % n as u128 == a as u128))
}

/// Least positive `d` with both `d` and `-d` nonresidues mod `n`.
pub fn find_obstructing_d(n: u64) -> Result<Option<u64>, ModulusError> {
    if n < 3 || n % 2 == 0 {
        return Err(ModulusError::TooSmall(n));
    }
    let sq = SquareSet::new(n);
    Ok((1..n).find(|&d| !sq.contains(d as i64) && !sq.contains(-(d as i64))))
}

/// `true` iff `det_k'` or `-det_k'` is a square mod `det_k`, i.e. `±det K' = -n^2` is solvable.
/// `false` means the pair obstructs unknotting number one for `K`.
pub fn pair_passes_det_condition(det_k: u64, det_neighbor: u64) -> Result<bool, ModulusError> {
    check_modulus(det_k as i64)?;
    check_modulus(det_neighbor as i64)?;
    let sq = SquareSet::new(det_k);
    Ok(pair_passes_with(&sq, det_neighbor))
}

pub(crate) fn pair_passes_with(sq: &SquareSet, det_neighbor: u64) -> bool {
    sq.contains(det_neighbor as i64) || sq.contains(-(det_neighbor as i64))
}

pub fn is_square(x: i64) -> bool {
    if x < 0 {
        return false;
    }
    let r = (x as f64).sqrt() as i64;
    (r.saturating_sub(1)..=r + 1).any(|s| s >= 0 && s.checked_mul(s) == Some(x))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessSearch {
    Found(u64),
    PerfectSquare,
    Exhausted,
}

impl WitnessSearch {
    pub fn prime(self) -> Option<u64> {
        match self {
            WitnessSearch::Found(p) => Some(p),
            _ => None,
        }
    }
}

/// Least odd prime `p <= bound`, not dividing `x`, with `x` a nonresidue mod `p`.
pub fn witness_prime_for_nonsquare(x: i64, bound: u64) -> WitnessSearch {
    if is_square(x) {
        return WitnessSearch::PerfectSquare;
    }
    (3..=bound)
        .step_by(2)
        .filter(|&p| is_prime(p))
        .find(|&p| x.rem_euclid(p as i64) != 0 && !SquareSet::new(p).contains(x))
        .map_or(WitnessSearch::Exhausted, WitnessSearch::Found)
}
