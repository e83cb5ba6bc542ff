//! Inductive construction of the representations: the root triangle group,
//! one-level extensions with parameter `L`, auto-tuning of `L` against the
//! certificates, and the parabolic stacking combiner.

use std::collections::BTreeMap;

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::groups::Word;
use crate::moebius::{axis_standardizer, perpendicular_circle_at, DiskShape, GeometryError, Side};
use crate::tree::{generator_order, TreeError, VertexAddress};
use crate::triangle::{alpha_point, build_44inf, build_qqp, TriangleError};
use crate::verify;
use crate::{hp, hp_complex, Circle, Disk, Hp, Moebius};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Triangle(#[from] TriangleError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("vertex {0} has no {1}")]
    MissingData(VertexAddress, &'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no L up to {l_max} passed the certificates (best: {})", best_summary(.attempts))]
    LmaxExceeded { l_max: f64, attempts: Vec<TuneAttempt> },
    #[error("support disk {0} is not a bounded disk")]
    UnboundedSupportDisk(usize),
}

fn best_summary(attempts: &[TuneAttempt]) -> String {
    match attempts.iter().max_by(|a, b| a.min_margin().total_cmp(&b.min_margin())) {
        Some(a) => format!(
            "L = {}, nesting {:.3e}, old side {:.3e}, new side {:.3e}",
            a.l, a.nesting_margin, a.old_margin, a.new_margin
        ),
        None => "no L tried".to_string(),
    }
}

/// Per-vertex data. The root has no matrix; vertices at the deepest level
/// have a matrix but no plane yet.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VertexData {
    pub matrix: Option<Moebius>,
    pub plane_circle: Option<Circle>,
    pub delta_disk: Option<Disk>,
    pub combination_circle: Option<Circle>,
}

/// Parameter used for the extension that created the depth-`k` generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub k: usize,
    #[serde(rename = "L")]
    pub l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub identity_tol: f64,
    pub margin_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let p = CertificateParams::default();
        Self {
            identity_tol: p.identity_tol,
            margin_floor: p.margin_floor,
        }
    }
}

/// The representation of the depth-`n` truncation together with the
/// geometric data of every realized vertex group.
#[derive(Debug, Clone, PartialEq)]
pub struct RepTable {
    pub depth: usize,
    pub tolerances: Tolerances,
    pub levels: Vec<Level>,
    pub vertices: BTreeMap<VertexAddress, VertexData>,
    pub provenance: Option<String>,
}

impl RepTable {
    pub fn vertex(&self, v: &VertexAddress) -> Option<&VertexData> {
        self.vertices.get(v)
    }

    pub fn matrix(&self, v: &VertexAddress) -> Option<&Moebius> {
        self.vertex(v).and_then(|d| d.matrix.as_ref())
    }

    fn require<T: Copy>(&self, v: &VertexAddress, what: &'static str, f: impl Fn(&VertexData) -> Option<T>) -> Result<T, BuildError> {
        self.vertex(v).and_then(f).ok_or_else(|| BuildError::MissingData(v.clone(), what))
    }

    pub fn require_matrix(&self, v: &VertexAddress) -> Result<Moebius, BuildError> {
        self.require(v, "matrix", |d| d.matrix)
    }

    pub fn require_plane(&self, v: &VertexAddress) -> Result<Circle, BuildError> {
        self.require(v, "plane circle", |d| d.plane_circle)
    }

    pub fn require_delta(&self, v: &VertexAddress) -> Result<Disk, BuildError> {
        self.require(v, "delta disk", |d| d.delta_disk)
    }

    /// Inner disk `B_v` bounded by the combination circle.
    pub fn combination_disk(&self, v: &VertexAddress) -> Result<Disk, BuildError> {
        let w = self.require(v, "combination circle", |d| d.combination_circle)?;
        Ok(Disk::new(w, Side::Negative))
    }

    /// Vertices in (depth, lexicographic) order.
    pub fn addresses(&self) -> Vec<VertexAddress> {
        let mut all: Vec<_> = self.vertices.keys().cloned().collect();
        all.sort_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| a.cmp(b)));
        all
    }

    /// `(address, matrix)` for every generator, depth-lexicographic.
    pub fn generators(&self) -> Vec<(VertexAddress, Moebius)> {
        self.addresses()
            .into_iter()
            .filter_map(|v| self.matrix(&v).map(|m| (v, *m)))
            .collect()
    }

    /// L used for the extension that created the depth-`k` generators.
    pub fn level_parameter(&self, k: usize) -> Option<f64> {
        self.levels.iter().find(|l| l.k == k).map(|l| l.l)
    }

    /// The table of the depth-`m` truncation contained in this one.
    pub fn restrict(&self, m: usize) -> RepTable {
        assert!(m >= 1 && m <= self.depth, "restriction depth out of range");
        let vertices = self
            .vertices
            .iter()
            .filter(|(v, _)| v.depth() <= m)
            .map(|(v, d)| {
                let mut d = *d;
                if v.depth() == m {
                    d.plane_circle = None;
                    d.delta_disk = None;
                    d.combination_circle = None;
                }
                (v.clone(), d)
            })
            .collect();
        RepTable {
            depth: m,
            tolerances: self.tolerances,
            levels: self.levels.iter().copied().filter(|l| l.k <= m).collect(),
            vertices,
            provenance: self.provenance.clone(),
        }
    }

    /// Image of a word in the generators `g_v`.
    pub fn evaluate(&self, word: &Word) -> Result<Moebius, BuildError> {
        let mut acc = Moebius::identity();
        for s in word.syllables() {
            let v = VertexAddress::from_generator_name(&s.generator)?;
            acc = acc * self.require_matrix(&v)?.pow(s.exponent);
        }
        Ok(acc)
    }
}

/// Word radii and tolerances of the finite certificates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateParams {
    pub word_radius_old: usize,
    pub word_radius_new: usize,
    pub margin_floor: f64,
    pub identity_tol: f64,
}

impl Default for CertificateParams {
    fn default() -> Self {
        Self {
            word_radius_old: 3,
            word_radius_new: 6,
            margin_floor: 1e-6,
            identity_tol: 1e-8,
        }
    }
}

/// The geometric ladder `L0, L0 growth, ...` capped at `l_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildParams {
    pub certificate: CertificateParams,
    pub l0: f64,
    pub growth: f64,
    pub l_max: f64,
}

impl Default for BuildParams {
    fn default() -> Self {
        Self {
            certificate: CertificateParams::default(),
            l0: 4.0,
            growth: 1.4,
            l_max: 64.0,
        }
    }
}

/// Margins observed for one candidate `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuneAttempt {
    #[serde(rename = "L")]
    pub l: f64,
    pub nesting_margin: f64,
    pub old_margin: f64,
    pub new_margin: f64,
    pub pass: bool,
}

impl TuneAttempt {
    pub fn min_margin(&self) -> f64 {
        self.nesting_margin.min(self.old_margin).min(self.new_margin)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TunedLevel {
    pub rep: RepTable,
    pub l_used: Option<f64>,
    pub ladder: Vec<TuneAttempt>,
}

/// Depth-1 table: the root `(4,4,inf)` group with the unit circle as its
/// plane and the open unit disk as its said disk.
pub fn build_level1() -> RepTable {
    let root = build_44inf::<Hp>();
    let mut vertices = BTreeMap::new();
    vertices.insert(
        VertexAddress::root(),
        VertexData {
            matrix: None,
            plane_circle: Some(root.invariant_circle),
            delta_disk: Some(root.said_disk),
            combination_circle: None,
        },
    );
    for (i, m) in [(1u8, root.a), (2, root.b)] {
        vertices.insert(
            VertexAddress::root().child(i),
            VertexData {
                matrix: Some(m),
                ..VertexData::default()
            },
        );
    }
    RepTable {
        depth: 1,
        tolerances: Tolerances::default(),
        levels: Vec::new(),
        vertices,
        provenance: None,
    }
}

/// Geometry produced for one leaf by an extension.
struct LeafExtension {
    leaf: VertexAddress,
    plane: Circle,
    delta: Disk,
    combination: Circle,
    children: (Moebius, Moebius),
}

fn extend_leaf(rep: &RepTable, z: &VertexAddress, l: f64) -> Result<LeafExtension, BuildError> {
    let parent = z.parent().expect("leaves are not the root");
    let g0 = rep.require_matrix(z)?;
    let parent_plane = rep.require_plane(&parent)?;
    let parent_delta = rep.require_delta(&parent)?;
    let alpha = alpha_point(&g0, &parent_delta)?;
    let standard = axis_standardizer(&g0, alpha)?;
    let (center, h) = parent_plane
        .image(&standard)
        .center_radius()
        .ok_or(TriangleError::AxisNotPerpendicular)?;
    if center.norm() > h * 1e-6 {
        return Err(TriangleError::AxisNotPerpendicular.into());
    }
    let back = standard.inverse();
    let d = perpendicular_circle_at(h, hp(l))?;
    let w = perpendicular_circle_at(h, hp(l / 2.0))?;
    let plane = d.image(&back);
    let delta = Disk::inside(d).image(&back);
    let order = generator_order(z)?;
    let children = build_qqp(order + 1, order, &plane, &g0)?;
    Ok(LeafExtension {
        leaf: z.clone(),
        plane,
        delta,
        combination: w.image(&back),
        children,
    })
}

/// Realizes the vertex groups of the current leaves with parameter `l`,
/// adding the generators one level deeper. Existing matrices are copied
/// unchanged.
pub fn extend_one_level(rep: &RepTable, l: f64) -> Result<RepTable, BuildError> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(BuildError::InvalidParameter(format!("L must be positive, got {l}")));
    }
    let leaves = VertexAddress::all_at_depth(rep.depth);
    let extensions: Vec<LeafExtension> = leaves
        .par_iter()
        .map(|z| extend_leaf(rep, z, l))
        .collect::<Result<_, _>>()?;
    let mut next = rep.clone();
    next.depth = rep.depth + 1;
    next.levels.push(Level { k: next.depth, l });
    for ext in extensions {
        let data = next.vertices.get_mut(&ext.leaf).expect("leaf present");
        data.plane_circle = Some(ext.plane);
        data.delta_disk = Some(ext.delta);
        data.combination_circle = Some(ext.combination);
        for (i, m) in [(1u8, ext.children.0), (2, ext.children.1)] {
            next.vertices.insert(
                ext.leaf.child(i),
                VertexData {
                    matrix: Some(m),
                    ..VertexData::default()
                },
            );
        }
    }
    Ok(next)
}

/// Certificates for the extension that produced level `k` of `candidate`.
pub fn level_attempt(candidate: &RepTable, l: f64, params: &CertificateParams) -> Result<TuneAttempt, BuildError> {
    let k = candidate.depth;
    let nesting = verify::check_nesting(candidate, params.margin_floor)?;
    let invariance = verify::check_precise_invariance(candidate, k, params)?;
    let attempt = TuneAttempt {
        l,
        nesting_margin: nesting.min_margin,
        old_margin: invariance.old_min,
        new_margin: invariance.new_min,
        pass: false,
    };
    Ok(TuneAttempt {
        pass: attempt.min_margin() >= params.margin_floor,
        ..attempt
    })
}

/// The L values `l0 * growth^j <= l_max`.
pub fn ladder(l0: f64, growth: f64, l_max: f64) -> Result<Vec<f64>, BuildError> {
    if !(l0 > 0.0) || !(growth > 1.0) || !l_max.is_finite() {
        return Err(BuildError::InvalidParameter(format!(
            "need L0 > 0, growth > 1 and finite L_max (got {l0}, {growth}, {l_max})"
        )));
    }
    let mut out = Vec::new();
    let mut l = l0;
    while l <= l_max {
        out.push(l);
        l *= growth;
    }
    Ok(out)
}

/// Extends by one level with the first L on the ladder whose nesting and
/// precise-invariance certificates pass.
pub fn auto_tune_level(rep: &RepTable, params: &CertificateParams, l0: f64, growth: f64, l_max: f64) -> Result<TunedLevel, BuildError> {
    let mut attempts = Vec::new();
    for l in ladder(l0, growth, l_max)? {
        let candidate = extend_one_level(rep, l)?;
        let attempt = level_attempt(&candidate, l, params)?;
        attempts.push(attempt);
        if attempt.pass {
            return Ok(TunedLevel {
                rep: candidate,
                l_used: Some(l),
                ladder: attempts,
            });
        }
    }
    Err(BuildError::LmaxExceeded { l_max, attempts })
}

/// Tables for depths `1..=depth`, each a restriction of the next.
pub fn build_all(depth: usize, params: &BuildParams) -> Result<Vec<TunedLevel>, BuildError> {
    if depth == 0 {
        return Err(BuildError::InvalidParameter("depth must be at least 1".into()));
    }
    let mut rep = build_level1();
    rep.tolerances = Tolerances {
        identity_tol: params.certificate.identity_tol,
        margin_floor: params.certificate.margin_floor,
    };
    let mut out = vec![TunedLevel {
        rep: rep.clone(),
        l_used: None,
        ladder: Vec::new(),
    }];
    for _ in 1..depth {
        let tuned = auto_tune_level(&rep, &params.certificate, params.l0, params.growth, params.l_max)?;
        rep = tuned.rep.clone();
        out.push(tuned);
    }
    Ok(out)
}

/// The depth-`depth` table.
pub fn build(depth: usize, params: &BuildParams) -> Result<RepTable, BuildError> {
    Ok(build_all(depth, params)?.pop().expect("at least one level").rep)
}

/// `A(z) = c2 + r^2 / (z - c1)`: maps the outside of `|z - c1| = r` onto the
/// inside of `|z - c2| = r`.
pub fn schottky_generator(c1: Complex64, c2: Complex64, r: f64) -> Moebius {
    let (c1, c2, r) = (hp_complex(c1), hp_complex(c2), hp(r));
    let k = Complex::new(Hp::zero(), r);
    let one = Complex::new(Hp::one(), Hp::zero());
    Moebius::new(c2 / k, (one * (r * r) - c1 * c2) / k, one / k, -c1 / k).expect("Schottky generator is invertible")
}

/// A group given by generators and a disk claimed to contain the image of its
/// complement under every nontrivial element.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportedGroup {
    pub generators: Vec<Moebius>,
    pub support: Disk,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairMargin {
    pub first: usize,
    pub second: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StackReport {
    pub pairwise: Vec<PairMargin>,
    pub min_margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stacked {
    pub generators: Vec<Vec<Moebius>>,
    pub offsets: Vec<f64>,
    pub report: StackReport,
}

/// Conjugates group `k` by the vertical translation `t_k`, with offsets
/// chosen so the lowest point of each translated support disk sits
/// `gap_factor * (r_{k-1} + r_k)` above the highest point of the previous
/// one. The report lists the margins of all pairs of translated disks; it
/// passes when every margin exceeds `margin_floor`.
pub fn stack_parabolic(groups: &[SupportedGroup], gap_factor: f64, margin_floor: f64) -> Result<Stacked, BuildError> {
    let mut shapes = Vec::with_capacity(groups.len());
    for (i, g) in groups.iter().enumerate() {
        match g.support.shape() {
            DiskShape::Bounded { center, radius } => shapes.push((center, radius)),
            _ => return Err(BuildError::UnboundedSupportDisk(i)),
        }
    }
    let mut offsets: Vec<Hp> = Vec::with_capacity(groups.len());
    for (k, &(center, radius)) in shapes.iter().enumerate() {
        let t = match k {
            0 => Hp::zero(),
            _ => {
                let (prev_center, prev_radius) = shapes[k - 1];
                let top = prev_center.im + offsets[k - 1] + prev_radius;
                top + (prev_radius + radius) * gap_factor + radius - center.im
            }
        };
        offsets.push(t);
    }
    let translations: Vec<Moebius> = offsets.iter().map(|&t| Moebius::vertical_translation(t)).collect();
    let disks: Vec<Disk> = groups.iter().zip(&translations).map(|(g, t)| g.support.image(t)).collect();
    let generators = groups
        .iter()
        .zip(&translations)
        .map(|(g, t)| g.generators.iter().map(|m| m.conjugate_by(t)).collect())
        .collect();
    let mut pairwise = Vec::new();
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            pairwise.push(PairMargin {
                first: i,
                second: j,
                margin: f64::from(disks[i].separation(&disks[j])),
            });
        }
    }
    let min_margin = pairwise.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min);
    Ok(Stacked {
        generators,
        offsets: offsets.into_iter().map(f64::from).collect(),
        report: StackReport {
            pass: pairwise.iter().all(|p| p.margin > margin_floor),
            pairwise,
            min_margin,
        },
    })
}

#[cfg(test)]
mod tests;
