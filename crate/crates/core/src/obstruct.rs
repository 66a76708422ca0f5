//! Verdict engines: the crossing-change determinant condition, Lickorish's linking-form
//! condition, and the complete-Alexander-neighbor screen, plus the batch survey runner.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::codec::{KnotRecord, UnknottingStatus};
use crate::diagram::{checkerboard, realize, shadow_with_flip, PlanarDiagram};
use crate::goeritz::{goeritz_matrix, knot_determinant, linking_diagonal, smith_normal_form};
use crate::laurent::{breadth2_parameter, forbidden_residue_class};
use crate::numtheory::{self, is_prime, witness_prime_for_nonsquare, ResidueCache, SquareSet};

/// Search bound for Kawauchi witness primes reported by the screen.
pub const WITNESS_PRIME_BOUND: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    DetCondition,
    Lickorish,
    CanScreen,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::DetCondition => "det_condition",
            Engine::Lickorish => "lickorish",
            Engine::CanScreen => "can_screen",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Obstructed,
    NotObstructed,
    Inapplicable,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Obstructed => "obstructed",
            Verdict::NotObstructed => "not_obstructed",
            Verdict::Inapplicable => "inapplicable",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Which complete-Alexander-neighbor criteria fired; `None` when the record lacks the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CanFlags {
    /// Algebraic unknotting number greater than one.
    pub a: Option<bool>,
    /// Determinant at least 3 and composite or congruent to 1 mod 4.
    pub b: Option<bool>,
    /// Alexander polynomial of breadth 2.
    pub c: Option<bool>,
}

impl CanFlags {
    pub fn any(&self) -> bool {
        [self.a, self.b, self.c].contains(&Some(true))
    }

    pub fn complete(&self) -> bool {
        self.a.is_some() && self.b.is_some() && self.c.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Flipping `position` gives a neighbor whose determinant fails the pair condition.
    NeighborDeterminant { det: u64, position: usize, neighbor_det: u64 },
    /// All sign-flip neighbors pass; other crossing changes are not examined.
    NeighborsPass { det: u64, neighbor_dets: Vec<u64> },
    NonCyclicHomology { torsion: Vec<u64> },
    /// `2 t^2 = ±numerator (mod det)` has no solution.
    LinkingEntry { det: u64, index: usize, numerator: u64 },
    LinkingPasses { det: u64, numerators: Vec<u64> },
    TrivialDeterminant,
    Can {
        flags: CanFlags,
        determinant: Option<u64>,
        forbidden_residue: Option<u64>,
        breadth2_n: Option<i64>,
        kawauchi_witness_prime: Option<u64>,
    },
    Error { message: String },
}

impl Evidence {
    /// Recomputes an obstruction claim from the raw numbers it carries.
    pub fn recheck(&self) -> bool {
        match self {
            Evidence::NeighborDeterminant { det, neighbor_det, .. } => {
                numtheory::pair_passes_det_condition(*det, *neighbor_det) == Ok(false)
            }
            Evidence::NonCyclicHomology { torsion } => {
                torsion.len() > 1 && torsion.windows(2).all(|w| w[1] % w[0] == 0)
            }
            Evidence::LinkingEntry { det, numerator, .. } => {
                !linking_entry_passes(&SquareSet::new(*det), *numerator)
            }
            Evidence::Can { flags, determinant, forbidden_residue, .. } => {
                if flags.b == Some(true) {
                    let Some(det) = determinant else { return false };
                    let d = *det;
                    let b_holds = d >= 3 && (!is_prime(d) || d % 4 == 1);
                    let residue_ok = forbidden_residue.is_some_and(|r| {
                        let sq = SquareSet::new(d);
                        !sq.contains(r as i64) && !sq.contains(-(r as i64))
                    });
                    if !(b_holds && residue_ok) {
                        return false;
                    }
                }
                flags.any()
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub name: String,
    pub engine: Engine,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl ObstructionReport {
    fn new(name: &str, engine: Engine, verdict: Verdict, evidence: Evidence) -> Self {
        ObstructionReport { name: name.to_string(), engine, verdict, evidence }
    }

    fn error(name: &str, engine: Engine, message: String) -> Self {
        Self::new(name, engine, Verdict::Inconclusive, Evidence::Error { message })
    }
}

fn det_condition_on(name: &str, diag: &PlanarDiagram, cache: &ResidueCache) -> ObstructionReport {
    let engine = Engine::DetCondition;
    let det = knot_determinant(diag);
    if det == 1 {
        return ObstructionReport::new(name, engine, Verdict::Inapplicable, Evidence::TrivialDeterminant);
    }
    let squares = cache.get(det);
    let mut neighbor_dets = Vec::with_capacity(diag.crossing_count());
    for position in 0..diag.crossing_count() {
        let flipped = shadow_with_flip(diag, position).expect("position in range");
        let neighbor_det = knot_determinant(&flipped);
        if !numtheory::pair_passes_with(&squares, neighbor_det) {
            return ObstructionReport::new(
                name,
                engine,
                Verdict::Obstructed,
                Evidence::NeighborDeterminant { det, position, neighbor_det },
            );
        }
        neighbor_dets.push(neighbor_det);
    }
    ObstructionReport::new(name, engine, Verdict::NotObstructed, Evidence::NeighborsPass { det, neighbor_dets })
}

fn linking_entry_passes(squares: &SquareSet, numerator: u64) -> bool {
    let det = squares.modulus() as i64;
    let c = numerator as i64;
    // 2 is invertible mod an odd modulus
    let half = (det + 1) / 2;
    let target = (c * half).rem_euclid(det);
    squares.contains(target) || squares.contains(-target)
}

fn lickorish_on(name: &str, diag: &PlanarDiagram, cache: &ResidueCache) -> ObstructionReport {
    let engine = Engine::Lickorish;
    let g = goeritz_matrix(diag, &checkerboard(diag));
    let det = g.determinant().unsigned_abs() as u64;
    if det <= 1 {
        return ObstructionReport::new(name, engine, Verdict::Inapplicable, Evidence::TrivialDeterminant);
    }
    let homology = match smith_normal_form(&g.g) {
        Ok(h) => h,
        Err(e) => return ObstructionReport::error(name, engine, e.to_string()),
    };
    if !homology.is_cyclic() {
        return ObstructionReport::new(
            name,
            engine,
            Verdict::Obstructed,
            Evidence::NonCyclicHomology { torsion: homology.torsion },
        );
    }
    let diagonal = match linking_diagonal(&g) {
        Ok(l) => l,
        Err(e) => return ObstructionReport::error(name, engine, e.to_string()),
    };
    let squares = cache.get(det);
    for (index, &numerator) in diagonal.numerators.iter().enumerate() {
        if !linking_entry_passes(&squares, numerator) {
            return ObstructionReport::new(
                name,
                engine,
                Verdict::Obstructed,
                Evidence::LinkingEntry { det, index, numerator },
            );
        }
    }
    ObstructionReport::new(
        name,
        engine,
        Verdict::NotObstructed,
        Evidence::LinkingPasses { det, numerators: diagonal.numerators },
    )
}

pub fn obstruct_u1_by_determinant(record: &KnotRecord) -> ObstructionReport {
    match realize(&record.dt) {
        Ok(d) => det_condition_on(&record.name, &d, &ResidueCache::new()),
        Err(e) => ObstructionReport::error(&record.name, Engine::DetCondition, e.to_string()),
    }
}

pub fn obstruct_u1_by_lickorish(record: &KnotRecord) -> ObstructionReport {
    match realize(&record.dt) {
        Ok(d) => lickorish_on(&record.name, &d, &ResidueCache::new()),
        Err(e) => ObstructionReport::error(&record.name, Engine::Lickorish, e.to_string()),
    }
}

pub fn can_flags(record: &KnotRecord) -> CanFlags {
    let a = record.u_algebraic.map(|u| u > 1);
    let b = record.known_determinant().map(|d| d >= 3 && (!is_prime(d) || d % 4 == 1));
    let c = record.alexander.as_ref().map(|p| p.breadth() == 2);
    CanFlags { a, b, c }
}

/// Screens `record` against the complete-Alexander-neighbor criteria using table data only.
pub fn screen_can(record: &KnotRecord) -> ObstructionReport {
    let flags = can_flags(record);
    let determinant = record.known_determinant();
    let forbidden_residue = match (flags.b, determinant) {
        (Some(true), Some(d)) => forbidden_residue_class(d).ok(),
        _ => None,
    };
    let breadth2_n = record.alexander.as_ref().and_then(breadth2_parameter);
    let kawauchi_witness_prime = breadth2_n
        .filter(|&n| n > 0)
        .and_then(|n| witness_prime_for_nonsquare(1 - 4 * n, WITNESS_PRIME_BOUND).prime());
    let verdict = if flags.any() {
        Verdict::Obstructed
    } else if flags.complete() {
        Verdict::NotObstructed
    } else {
        Verdict::Inconclusive
    };
    ObstructionReport::new(
        &record.name,
        Engine::CanScreen,
        verdict,
        Evidence::Can { flags, determinant, forbidden_residue, breadth2_n, kawauchi_witness_prime },
    )
}

#[derive(Debug, Clone, Default)]
pub struct SurveyOptions {
    /// Only survey knots not known to have unknotting number one.
    pub only_unknown: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct VerdictCounts {
    pub obstructed: usize,
    pub not_obstructed: usize,
    pub inapplicable: usize,
    pub inconclusive: usize,
}

impl VerdictCounts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Obstructed => self.obstructed += 1,
            Verdict::NotObstructed => self.not_obstructed += 1,
            Verdict::Inapplicable => self.inapplicable += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CriterionCounts {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub union: usize,
    pub screened: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnotSurvey {
    pub name: String,
    pub reports: Vec<ObstructionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub knots: Vec<KnotSurvey>,
    pub engine_counts: BTreeMap<Engine, VerdictCounts>,
    pub criterion_counts: CriterionCounts,
}

impl SurveyReport {
    pub fn reports(&self) -> impl Iterator<Item = &ObstructionReport> {
        self.knots.iter().flat_map(|k| k.reports.iter())
    }

    pub fn names_with(&self, engine: Engine, verdict: Verdict) -> Vec<&str> {
        self.reports()
            .filter(|r| r.engine == engine && r.verdict == verdict)
            .map(|r| r.name.as_str())
            .collect()
    }
}

fn survey_one(record: &KnotRecord, engines: &[Engine], cache: &ResidueCache) -> KnotSurvey {
    let needs_diagram = engines.iter().any(|e| matches!(e, Engine::DetCondition | Engine::Lickorish));
    let diagram = needs_diagram.then(|| realize(&record.dt));
    let reports = engines
        .iter()
        .map(|&engine| match (engine, &diagram) {
            (Engine::CanScreen, _) => screen_can(record),
            (_, Some(Err(e))) => ObstructionReport::error(&record.name, engine, e.to_string()),
            (Engine::DetCondition, Some(Ok(d))) => det_condition_on(&record.name, d, cache),
            (Engine::Lickorish, Some(Ok(d))) => lickorish_on(&record.name, d, cache),
            (_, None) => unreachable!("diagram realized for diagram engines"),
        })
        .collect();
    KnotSurvey { name: record.name.clone(), reports }
}

/// Runs `engines` over `records` in parallel; output order follows input order.
pub fn run_survey(records: &[KnotRecord], engines: &[Engine], options: &SurveyOptions) -> SurveyReport {
    let cache = ResidueCache::new();
    let selected: Vec<&KnotRecord> = records
        .iter()
        .filter(|r| !options.only_unknown || r.unknotting_status != UnknottingStatus::One)
        .collect();
    let knots: Vec<KnotSurvey> = selected.par_iter().map(|r| survey_one(r, engines, &cache)).collect();

    let mut engine_counts: BTreeMap<Engine, VerdictCounts> =
        engines.iter().map(|&e| (e, VerdictCounts::default())).collect();
    let mut criterion_counts = CriterionCounts::default();
    for k in &knots {
        for r in &k.reports {
            engine_counts.entry(r.engine).or_default().add(r.verdict);
            if let Evidence::Can { flags, .. } = &r.evidence {
                criterion_counts.screened += 1;
                criterion_counts.a += usize::from(flags.a == Some(true));
                criterion_counts.b += usize::from(flags.b == Some(true));
                criterion_counts.c += usize::from(flags.c == Some(true));
                criterion_counts.union += usize::from(flags.any());
            }
        }
    }
    SurveyReport { knots, engine_counts, criterion_counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{parse_dt, DtCode};
    use crate::laurent::LaurentPoly;

    const K11N162: &str = "[6, -10, 12, 22, 16, -18, 8, 20, -4, 2, 14]";

    fn rec(name: &str, dt: &str) -> KnotRecord {
        KnotRecord::new(name, parse_dt(dt).unwrap())
    }

    #[test]
    fn det_engine_11n162() {
        let r = obstruct_u1_by_determinant(&rec("11n162", K11N162));
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(r.evidence, Evidence::NeighborDeterminant { det: 55, position: 0, neighbor_det: 23 });
        assert!(r.evidence.recheck());
    }

    #[test]
    fn det_engine_trefoil_and_unknot() {
        let r = obstruct_u1_by_determinant(&rec("3_1", "[4, 6, 2]"));
        assert_eq!(r.verdict, Verdict::NotObstructed);
        let Evidence::NeighborsPass { det, neighbor_dets } = &r.evidence else { panic!() };
        assert_eq!(*det, 3);
        assert_eq!(neighbor_dets.len(), 3);
        assert!(neighbor_dets.iter().all(|d| d % 2 == 1));
        let r = obstruct_u1_by_determinant(&rec("0_1", "[]"));
        assert_eq!(r.verdict, Verdict::Inapplicable);
    }

    #[test]
    fn det_engine_reports_realization_failure() {
        let r = obstruct_u1_by_determinant(&rec("bogus", "[4, 6, 8, 10, 2]"));
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(matches!(r.evidence, Evidence::Error { .. }));
    }

    #[test]
    fn lickorish_engine_11n162() {
        let r = obstruct_u1_by_lickorish(&rec("11n162", K11N162));
        assert_eq!(r.verdict, Verdict::Obstructed, "{:?}", r.evidence);
        assert!(r.evidence.recheck());
    }

    #[test]
    fn lickorish_engine_trefoil() {
        let r = obstruct_u1_by_lickorish(&rec("3_1", "[4, 6, 2]"));
        assert_eq!(r.verdict, Verdict::NotObstructed);
        assert_eq!(obstruct_u1_by_lickorish(&rec("0_1", "[]")).verdict, Verdict::Inapplicable);
    }

    #[test]
    fn linking_entry_condition() {
        let sq = SquareSet::new(55);
        assert!(!linking_entry_passes(&sq, 16));
        let sq3 = SquareSet::new(3);
        assert!(linking_entry_passes(&sq3, 1));
        assert!(linking_entry_passes(&sq3, 2));
    }

    #[test]
    fn noncyclic_evidence_rechecks() {
        assert!(Evidence::NonCyclicHomology { torsion: vec![3, 3] }.recheck());
        assert!(!Evidence::NonCyclicHomology { torsion: vec![15] }.recheck());
    }

    #[test]
    fn can_screen_examples() {
        let mut fig8 = rec("4_1", "[4, 6, 8, 2]");
        fig8.alexander = Some("-t^-1 + 3 - t".parse().unwrap());
        fig8.u_algebraic = Some(1);
        let r = screen_can(&fig8);
        assert_eq!(r.verdict, Verdict::Obstructed);
        let Evidence::Can { flags, forbidden_residue, .. } = &r.evidence else { panic!() };
        assert_eq!(flags.b, Some(true));
        assert_eq!(flags.c, Some(true));
        assert_eq!(*forbidden_residue, Some(2));
        assert!(r.evidence.recheck());

        let mut k62 = rec("6_2", "[4, 8, 10, 12, 2, 6]");
        k62.alexander = Some("-2;-1 3 -3 3 -1".parse().unwrap());
        k62.u_algebraic = Some(1);
        k62.determinant_claimed = Some(11);
        assert_eq!(screen_can(&k62).verdict, Verdict::NotObstructed);

        let bare = KnotRecord::new("mystery", DtCode::empty());
        assert_eq!(screen_can(&bare).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn can_screen_trefoil_has_kawauchi_witness() {
        let mut k = rec("3_1", "[4, 6, 2]");
        k.alexander = Some(LaurentPoly::breadth_two(1));
        let Evidence::Can { flags, breadth2_n, kawauchi_witness_prime, .. } = screen_can(&k).evidence else {
            panic!()
        };
        assert_eq!(flags.c, Some(true));
        assert_eq!(breadth2_n, Some(1));
        assert_eq!(kawauchi_witness_prime, Some(5));
    }

    #[test]
    fn survey_empty_and_ordering() {
        let all = [Engine::DetCondition, Engine::Lickorish, Engine::CanScreen];
        let empty = run_survey(&[], &all, &SurveyOptions::default());
        assert!(empty.knots.is_empty());
        assert_eq!(empty.criterion_counts, CriterionCounts::default());

        let mut one = rec("3_1", "[4, 6, 2]");
        one.unknotting_status = UnknottingStatus::One;
        let mut two = rec("5_1", "[6, 8, 10, 2, 4]");
        two.unknotting_status = UnknottingStatus::Greater;
        let records = vec![rec("11n162", K11N162), one, rec("0_1", "[]"), two];
        let s = run_survey(&records, &all, &SurveyOptions::default());
        let names: Vec<&str> = s.knots.iter().map(|k| k.name.as_str()).collect();
        assert_eq!(names, ["11n162", "3_1", "0_1", "5_1"]);
        assert_eq!(s.engine_counts[&Engine::DetCondition].obstructed, 2);
        assert_eq!(s.criterion_counts.screened, 4);

        let s = run_survey(&records, &all, &SurveyOptions { only_unknown: true });
        let names: Vec<&str> = s.knots.iter().map(|k| k.name.as_str()).collect();
        assert_eq!(names, ["11n162", "0_1", "5_1"]);
    }
}
