//! Finite certificates over a built representation, plus the quotient
//! experiment and limit-set sampling.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builder::{BuildError, CertificateParams, RepTable};
use crate::groups::{enumerate_homs, search_space_size, FiniteGroup};
use crate::moebius::{Classification, Point};
use crate::tree::{generator_order, presentation_full, presentation_leaf, sample_alternating_words, TreeError, VertexAddress};
use num_complex::Complex;
use num_traits::Zero;

use crate::{hp, rng, to_f64_point, Disk, Hp, Moebius, SpherePoint};

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Failures listed in a report are capped at this many entries.
const MAX_LISTED_FAILURES: usize = 50;

/// Tolerance for deciding that a matrix is a power of an edge generator.
pub const POWER_TOL: f64 = 1e-8;

/// Summary record written to report files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub pass: bool,
    pub min_margin: f64,
    pub failures: Vec<String>,
}

fn push_failure(failures: &mut Vec<String>, msg: impl FnOnce() -> String) {
    if failures.len() < MAX_LISTED_FAILURES {
        failures.push(msg());
    }
}

/// A generator or inverse generator used to spell words.
#[derive(Debug, Clone)]
struct Letter {
    name: String,
    matrix: Moebius,
    inverse: usize,
}

fn alphabet(gens: &[(String, Moebius)]) -> Vec<Letter> {
    gens.iter()
        .enumerate()
        .flat_map(|(i, (name, m))| {
            [
                Letter {
                    name: name.clone(),
                    matrix: *m,
                    inverse: 2 * i + 1,
                },
                Letter {
                    name: format!("{name}^-1"),
                    matrix: m.inverse(),
                    inverse: 2 * i,
                },
            ]
        })
        .collect()
}

fn spell(letters: &[Letter], word: &[usize]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter().map(|&i| letters[i].name.as_str()).collect::<Vec<_>>().join(" ")
}

/// Every freely reduced word of length at most `radius`, with its matrix.
fn word_ball(letters: &[Letter], radius: usize) -> Vec<(Vec<usize>, Moebius)> {
    let mut out = vec![(Vec::new(), Moebius::identity())];
    let mut frontier = 0;
    for _ in 0..radius {
        let end = out.len();
        for idx in frontier..end {
            let (word, m): (Vec<usize>, Moebius) = out[idx].clone();
            for (i, letter) in letters.iter().enumerate() {
                if word.last().is_some_and(|&last| letters[last].inverse == i) {
                    continue;
                }
                let mut w = word.clone();
                w.push(i);
                out.push((w, m * letter.matrix));
            }
        }
        frontier = end;
    }
    out
}

fn named(v: &VertexAddress, m: &Moebius) -> (String, Moebius) {
    (v.generator_name().expect("non-root vertex"), *m)
}

fn is_power_of(gamma: &Moebius, powers: &[Moebius]) -> bool {
    powers.iter().any(|p| gamma.projective_distance(p) <= POWER_TOL)
}

fn powers(g: &Moebius, order: u32) -> Vec<Moebius> {
    (0..i64::from(order)).map(|j| g.pow(j)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelatorFailure {
    pub relator: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelatorReport {
    pub relators_checked: usize,
    pub max_residual: f64,
    pub failures: Vec<RelatorFailure>,
    pub tol: f64,
}

impl RelatorReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tol
    }

    pub fn to_report(&self) -> Report {
        Report {
            check: "relators".into(),
            pass: self.passed(),
            min_margin: self.tol - self.max_residual,
            failures: self
                .failures
                .iter()
                .take(MAX_LISTED_FAILURES)
                .map(|f| format!("{}: residual {:e}", f.relator, f.residual))
                .collect(),
        }
    }
}

/// Evaluates every relator of the full presentation of the table's depth;
/// the residual of a relator is the projective distance of its image to the
/// identity.
pub fn check_relators(rep: &RepTable, tol: f64) -> Result<RelatorReport, BuildError> {
    let presentation = presentation_full(rep.depth)?;
    let mut max_residual: f64 = 0.0;
    let mut failures = Vec::new();
    for relator in presentation.relators() {
        let residual = f64::from(rep.evaluate(relator)?.distance_to_identity());
        max_residual = max_residual.max(residual);
        if !(residual <= tol) {
            failures.push(RelatorFailure {
                relator: relator.to_string(),
                residual,
            });
        }
    }
    Ok(RelatorReport {
        relators_checked: presentation.relators().len(),
        max_residual,
        failures,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestingReport {
    pub min_margin: f64,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl NestingReport {
    pub fn to_report(&self) -> Report {
        Report {
            check: "nesting".into(),
            pass: self.pass,
            min_margin: self.min_margin,
            failures: self.failures.clone(),
        }
    }
}

/// Disk nesting: each realized `Delta_{v i}` lies inside `Delta_v`, siblings
/// are disjoint, and `Delta_z` lies inside the combination disk `B_z`, which
/// lies inside the parent's `Delta`.
pub fn check_nesting(rep: &RepTable, margin_floor: f64) -> Result<NestingReport, BuildError> {
    let mut min_margin = f64::INFINITY;
    let mut failures = Vec::new();
    let mut record = |margin: f64, what: &dyn Fn() -> String| {
        min_margin = min_margin.min(margin);
        if !(margin >= margin_floor) {
            push_failure(&mut failures, || format!("{}: margin {margin:e}", what()));
        }
    };
    for v in rep.addresses() {
        let Some(delta) = rep.vertex(&v).and_then(|d| d.delta_disk) else {
            continue;
        };
        let children: Vec<(VertexAddress, Disk)> = [1u8, 2]
            .iter()
            .filter_map(|&i| {
                let c = v.child(i);
                rep.vertex(&c).and_then(|d| d.delta_disk).map(|d| (c, d))
            })
            .collect();
        for (c, child) in &children {
            record(f64::from(child.inside_margin(&delta)), &|| format!("Delta_{c} inside Delta_{v}"));
            let b = rep.combination_disk(c)?;
            record(f64::from(child.inside_margin(&b)), &|| format!("Delta_{c} inside B_{c}"));
            record(f64::from(b.inside_margin(&delta)), &|| format!("B_{c} inside Delta_{v}"));
        }
        if let [(c1, d1), (c2, d2)] = children.as_slice() {
            record(f64::from(d1.separation(d2)), &|| format!("Delta_{c1} disjoint from Delta_{c2}"));
        }
    }
    Ok(NestingReport {
        pass: failures.is_empty(),
        min_margin,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexMargins {
    pub vertex: String,
    pub old_margin: f64,
    pub new_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreciseInvarianceReport {
    pub level: usize,
    pub per_vertex: Vec<VertexMargins>,
    pub old_min: f64,
    pub new_min: f64,
    pub margin_floor: f64,
    pub failures: Vec<String>,
}

impl PreciseInvarianceReport {
    pub fn min_margin(&self) -> f64 {
        self.old_min.min(self.new_min)
    }

    pub fn passed(&self) -> bool {
        self.min_margin() >= self.margin_floor
    }

    pub fn to_report(&self) -> Report {
        Report {
            check: format!("precise_invariance_level_{}", self.level),
            pass: self.passed(),
            min_margin: self.min_margin(),
            failures: self.failures.clone(),
        }
    }
}

/// Minimum over a word scan plus the first few offending words.
#[derive(Default)]
struct Scan {
    min: f64,
    failures: Vec<String>,
}

impl Scan {
    fn new() -> Self {
        Self {
            min: f64::INFINITY,
            failures: Vec::new(),
        }
    }

    fn merge(mut self, other: Scan) -> Scan {
        self.min = self.min.min(other.min);
        for f in other.failures {
            push_failure(&mut self.failures, || f);
        }
        self
    }
}

/// Truncated Klein-Maskit hypotheses for the extension that created the
/// depth-`k` generators. The combination vertices are the depth-`k - 1`
/// vertices `z`, with inner disk `B_z` bounded by the combination circle.
///
/// Old side: for every reduced word `g` of length at most `word_radius_old`
/// in the generators of depth below `k`, `g(B_z)` must miss `B_z` (unless
/// `g` is a power of `M_z`) and every other `B_z'`.
/// New side: for every reduced word `h` of length at most `word_radius_new`
/// in the two children of `z` that is not a power of `M_z`, `h(E_z)` must
/// miss `E_z`, where `E_z` is the complement of `B_z`.
pub fn check_precise_invariance(rep: &RepTable, k: usize, params: &CertificateParams) -> Result<PreciseInvarianceReport, BuildError> {
    if k < 2 || k > rep.depth {
        return Err(BuildError::InvalidParameter(format!("level {k} outside 2..={}", rep.depth)));
    }
    let floor = params.margin_floor;
    let combination: Vec<VertexAddress> = VertexAddress::all_at_depth(k - 1);
    let disks: Vec<Disk> = combination.iter().map(|z| rep.combination_disk(z)).collect::<Result<_, _>>()?;
    let edge_powers: Vec<Vec<Moebius>> = combination
        .iter()
        .map(|z| Ok(powers(&rep.require_matrix(z)?, generator_order(z)?)))
        .collect::<Result<_, BuildError>>()?;

    let old_gens: Vec<(String, Moebius)> = rep
        .generators()
        .into_iter()
        .filter(|(v, _)| v.depth() < k)
        .map(|(v, m)| named(&v, &m))
        .collect();
    let old_letters = alphabet(&old_gens);
    let old_ball = word_ball(&old_letters, params.word_radius_old);

    let mut per_vertex = Vec::new();
    let mut all_failures = Vec::new();
    let (mut old_min, mut new_min) = (f64::INFINITY, f64::INFINITY);
    for (zi, z) in combination.iter().enumerate() {
        let b_z = disks[zi];
        let old = old_ball
            .par_iter()
            .map(|(word, gamma)| {
                let mut scan = Scan::new();
                let image = b_z.image(gamma);
                let mut check = |margin: f64, target: &VertexAddress| {
                    scan.min = scan.min.min(margin);
                    if !(margin >= floor) {
                        push_failure(&mut scan.failures, || {
                            format!("old side: ({})(B_{z}) meets B_{target}, margin {margin:e}", spell(&old_letters, word))
                        });
                    }
                };
                if !is_power_of(gamma, &edge_powers[zi]) {
                    check(f64::from(image.separation(&b_z)), z);
                }
                for (wi, w) in combination.iter().enumerate() {
                    if wi != zi {
                        check(f64::from(image.separation(&disks[wi])), w);
                    }
                }
                scan
            })
            .reduce(Scan::new, Scan::merge);

        let new_gens = [1u8, 2]
            .iter()
            .map(|&i| {
                let c = z.child(i);
                Ok(named(&c, &rep.require_matrix(&c)?))
            })
            .collect::<Result<Vec<_>, BuildError>>()?;
        let new_letters = alphabet(&new_gens);
        let e_z = b_z.complement();
        let new = word_ball(&new_letters, params.word_radius_new)
            .par_iter()
            .map(|(word, h)| {
                let mut scan = Scan::new();
                if !is_power_of(h, &edge_powers[zi]) {
                    let margin = f64::from(e_z.image(h).separation(&e_z));
                    scan.min = margin;
                    if !(margin >= floor) {
                        push_failure(&mut scan.failures, || {
                            format!("new side: ({})(E_{z}) meets E_{z}, margin {margin:e}", spell(&new_letters, word))
                        });
                    }
                }
                scan
            })
            .reduce(Scan::new, Scan::merge);

        old_min = old_min.min(old.min);
        new_min = new_min.min(new.min);
        for f in old.failures.into_iter().chain(new.failures) {
            push_failure(&mut all_failures, || f);
        }
        per_vertex.push(VertexMargins {
            vertex: z.to_string(),
            old_margin: old.min,
            new_margin: new.min,
        });
    }
    Ok(PreciseInvarianceReport {
        level: k,
        per_vertex,
        old_min,
        new_min,
        margin_floor: floor,
        failures: all_failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub samples: usize,
    pub min_separation: f64,
    pub tol: f64,
    pub failures: Vec<String>,
}

impl SeparationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_report(&self) -> Report {
        Report {
            check: "separation_words".into(),
            pass: self.passed(),
            min_margin: self.min_separation,
            failures: self.failures.clone(),
        }
    }
}

/// Evaluates random words in alternating normal form (nontrivial in the
/// group) and requires each image to stay at least `tol` away from `+-I`.
pub fn check_separation_words(rep: &RepTable, samples: usize, max_syllables: usize, seed: u64, tol: f64) -> Result<SeparationReport, BuildError> {
    let words = sample_alternating_words(rep.depth, samples, max_syllables, seed);
    let mut min_separation = f64::INFINITY;
    let mut failures = Vec::new();
    for w in &words {
        let sep = f64::from(rep.evaluate(w)?.distance_to_identity());
        min_separation = min_separation.min(sep);
        if !(sep >= tol) {
            push_failure(&mut failures, || format!("{w}: distance to identity {sep:e}"));
        }
    }
    Ok(SeparationReport {
        samples: words.len(),
        min_separation,
        tol,
        failures,
    })
}

/// Jorgensen quantity threshold (1 minus rounding slack).
pub const JORGENSEN_THRESHOLD: f64 = 1.0 - 1e-9;

/// Fixed points closer than this (chordally) count as shared.
pub const COMMON_FIXED_POINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JorgensenViolation {
    pub a: String,
    pub b: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JorgensenReport {
    pub pairs_sampled: usize,
    pub skipped_elementary: usize,
    pub min_value: f64,
    pub violations: Vec<JorgensenViolation>,
}

impl JorgensenReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_report(&self) -> Report {
        Report {
            check: "jorgensen".into(),
            pass: self.passed(),
            min_margin: self.min_value - JORGENSEN_THRESHOLD,
            failures: self
                .violations
                .iter()
                .take(MAX_LISTED_FAILURES)
                .map(|v| format!("({}, {}): {:e}", v.a, v.b, v.value))
                .collect(),
        }
    }
}

/// `|tr^2 A - 4| + |tr [A, B] - 2|`, or `None` when the pair is elementary
/// by the fixed-point test (or either element is the identity).
pub fn jorgensen_value(a: &Moebius, b: &Moebius) -> Option<f64> {
    let tol = hp(1e-9);
    if a.classify(tol) == Classification::Identity || b.classify(tol) == Classification::Identity {
        return None;
    }
    let fa = a.fixed_points().ok()?.to_vec();
    let fb = b.fixed_points().ok()?.to_vec();
    if fa.iter().any(|p| fb.iter().any(|q| p.chordal_distance(q) < COMMON_FIXED_POINT_TOL)) {
        return None;
    }
    let tr_a = a.trace();
    let commutator = *a * *b * a.inverse() * b.inverse();
    let two = Complex::new(hp(2.0), Hp::zero());
    Some(f64::from((tr_a * tr_a - two * two).norm() + (commutator.trace() - two).norm()))
}

/// Samples pairs of random reduced words (1 to 3 letters) in the given
/// generators and their inverses and reports Jorgensen violations.
pub fn jorgensen_scan_generators(gens: &[(String, Moebius)], pair_count: usize, seed: u64) -> JorgensenReport {
    let letters = alphabet(gens);
    let mut rng = rng::stream(seed, "verify/jorgensen");
    let random_word = |rng: &mut rand_chacha::ChaCha8Rng| {
        let len = rng.gen_range(1..=3usize);
        let mut word: Vec<usize> = Vec::with_capacity(len);
        while word.len() < len {
            let i = rng.gen_range(0..letters.len());
            if word.last().is_some_and(|&last| letters[last].inverse == i) {
                continue;
            }
            word.push(i);
        }
        word
    };
    let pairs: Vec<(Vec<usize>, Vec<usize>)> = (0..pair_count).map(|_| (random_word(&mut rng), random_word(&mut rng))).collect();
    let eval = |w: &[usize]| w.iter().fold(Moebius::identity(), |acc, &i| acc * letters[i].matrix);
    let values: Vec<Option<f64>> = pairs.par_iter().map(|(a, b)| jorgensen_value(&eval(a), &eval(b))).collect();
    let mut report = JorgensenReport {
        pairs_sampled: pair_count,
        skipped_elementary: 0,
        min_value: f64::INFINITY,
        violations: Vec::new(),
    };
    for ((a, b), value) in pairs.iter().zip(values) {
        match value {
            None => report.skipped_elementary += 1,
            Some(v) => {
                report.min_value = report.min_value.min(v);
                if v < JORGENSEN_THRESHOLD {
                    report.violations.push(JorgensenViolation {
                        a: spell(&letters, a),
                        b: spell(&letters, b),
                        value: v,
                    });
                }
            }
        }
    }
    report
}

/// [`jorgensen_scan_generators`] over all generators of the table.
pub fn jorgensen_scan(rep: &RepTable, pair_count: usize, seed: u64) -> JorgensenReport {
    let gens: Vec<(String, Moebius)> = rep.generators().iter().map(|(v, m)| named(v, m)).collect();
    jorgensen_scan_generators(&gens, pair_count, seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientRow {
    pub n: usize,
    pub group: String,
    pub order: usize,
    pub hom_count: usize,
    pub nontrivial_count: usize,
    /// `gcd(3 + n, |H|) = 1`.
    pub gcd_flag: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("search space {size:e} for depth {n} and {group} exceeds the guard {guard:e}")]
    SearchSpaceExceeded { n: usize, group: String, size: f64, guard: f64 },
}

/// Search spaces larger than this are refused by the quotient experiment.
pub const DEFAULT_SEARCH_GUARD: f64 = 1e12;

/// Counts homomorphisms from the depth-`n` truncation (leaf presentation) to
/// each catalog group for `n = 1..=n_max`. A row is consistent unless
/// `gcd(3 + n, |H|) = 1` and a nontrivial homomorphism exists.
pub fn quotient_experiment(n_max: usize, catalog: &[FiniteGroup], guard: f64) -> Result<Vec<QuotientRow>, VerifyError> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let presentation = presentation_leaf(n)?;
        for h in catalog {
            let size = search_space_size(&presentation, h);
            if size > guard {
                return Err(VerifyError::SearchSpaceExceeded {
                    n,
                    group: h.name().to_string(),
                    size,
                    guard,
                });
            }
            let homs = enumerate_homs(&presentation, h);
            let nontrivial_count = homs.iter().filter(|f| !f.is_trivial()).count();
            let gcd_flag = gcd(3 + n, h.order()) == 1;
            rows.push(QuotientRow {
                n,
                group: h.name().to_string(),
                order: h.order(),
                hom_count: homs.len(),
                nontrivial_count,
                gcd_flag,
                consistent: !gcd_flag || nontrivial_count == 0,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitTarget {
    WholeGroup,
    Vertex(VertexAddress),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitSample {
    pub points: Vec<Point<f64>>,
    /// For a vertex target: largest distance from a finite sample to the
    /// vertex's plane circle.
    pub max_circle_distance: Option<f64>,
}

/// Fixed point of the first non-elliptic word of length 2 to 4.
fn limit_seed(letters: &[Letter]) -> Option<SpherePoint> {
    word_ball(letters, 4)
        .into_iter()
        .filter(|(w, _)| w.len() >= 2)
        .find_map(|(_, m)| match m.classify(hp(1e-9)) {
            Classification::Parabolic | Classification::Loxodromic => m.fixed_points().ok().map(|f| f.to_vec()[0]),
            _ => None,
        })
}

/// Vertex-group generators: the root group is generated by `M_1, M_2`, the
/// group of a deeper vertex by its two children.
fn vertex_generators(rep: &RepTable, v: &VertexAddress) -> Result<Vec<(String, Moebius)>, BuildError> {
    [1u8, 2]
        .iter()
        .map(|&i| {
            let c = v.child(i);
            Ok(named(&c, &rep.require_matrix(&c)?))
        })
        .collect()
}

/// Images of a limit point under `count` random reduced words of length
/// `word_len`.
pub fn limit_points(rep: &RepTable, target: &LimitTarget, count: usize, word_len: usize, seed: u64) -> Result<LimitSample, BuildError> {
    let root_letters = alphabet(&vertex_generators(rep, &VertexAddress::root())?);
    let (letters, circle) = match target {
        LimitTarget::WholeGroup => {
            let gens: Vec<(String, Moebius)> = rep.generators().iter().map(|(v, m)| named(v, m)).collect();
            (alphabet(&gens), None)
        }
        LimitTarget::Vertex(v) => (alphabet(&vertex_generators(rep, v)?), Some(rep.require_plane(v)?)),
    };
    let seed_point = match target {
        LimitTarget::WholeGroup => limit_seed(&root_letters),
        LimitTarget::Vertex(_) => limit_seed(&letters),
    }
    .expect("vertex groups contain non-elliptic elements");
    let mut rng = rng::stream(seed, "verify/limit-points");
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let mut p = seed_point;
        let mut previous: Option<usize> = None;
        for _ in 0..word_len {
            let i = loop {
                let i = rng.gen_range(0..letters.len());
                if previous.is_none_or(|last| letters[last].inverse != i) {
                    break i;
                }
            };
            p = letters[i].matrix.apply(p);
            previous = Some(i);
        }
        points.push(p);
    }
    let max_circle_distance = circle.map(|c| {
        points
            .iter()
            .filter_map(|p| p.finite())
            .map(|z| f64::from(c.distance_to(z)))
            .fold(0.0, f64::max)
    });
    let points = points.iter().map(to_f64_point).collect();
    Ok(LimitSample {
        points,
        max_circle_distance,
    })
}
