use std::sync::Arc;

use rayon::prelude::*;

use super::{Element, FiniteGroup, GroupError, Presentation, Word};

/// A homomorphism from a finitely presented group into a [`FiniteGroup`],
/// given by the images of the presentation generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism<'g> {
    generators: Arc<[String]>,
    target: &'g FiniteGroup,
    images: Vec<Element>,
}

impl<'g> Homomorphism<'g> {
    /// Assignment of generator images; relators are not checked here (see
    /// [`Homomorphism::respects`]).
    pub fn new(presentation: &Presentation, target: &'g FiniteGroup, images: Vec<Element>) -> Self {
        assert_eq!(presentation.generators().len(), images.len());
        Self {
            generators: presentation.generators().into(),
            target,
            images,
        }
    }

    pub fn target(&self) -> &'g FiniteGroup {
        self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn image_of(&self, generator: &str) -> Option<Element> {
        let i = self.generators.iter().position(|g| g == generator)?;
        Some(self.images[i])
    }

    /// All generator images are the identity.
    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&x| x == self.target.identity())
    }

    /// Every relator of `presentation` evaluates to the identity.
    pub fn respects(&self, presentation: &Presentation) -> Result<bool, GroupError> {
        for r in presentation.relators() {
            if evaluate(r, self)? != self.target.identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Image of `word` under `hom`.
pub fn evaluate(word: &Word, hom: &Homomorphism<'_>) -> Result<Element, GroupError> {
    let h = hom.target;
    let mut acc = h.identity();
    for s in word.syllables() {
        let x = hom
            .image_of(&s.generator)
            .ok_or_else(|| GroupError::UnknownGenerator(s.generator.clone()))?;
        acc = h.mul(acc, h.pow(x, s.exponent));
    }
    Ok(acc)
}

/// Relators compiled to generator indices with exponents reduced per image.
type CompiledRelator = Vec<(usize, i64)>;

struct SearchPlan {
    candidates: Vec<Vec<Element>>,
    /// `checks[d]` holds relators whose last generator (in search order) is `d`.
    checks: Vec<Vec<CompiledRelator>>,
}

fn plan(presentation: &Presentation, target: &FiniteGroup) -> SearchPlan {
    let n = presentation.generators().len();
    let mut candidates: Vec<Vec<Element>> = vec![target.elements().collect(); n];
    let mut checks: Vec<Vec<CompiledRelator>> = vec![Vec::new(); n];
    for r in presentation.relators() {
        let reduced = r.reduced();
        let compiled: CompiledRelator = reduced
            .syllables()
            .iter()
            .map(|s| {
                let i = presentation
                    .generator_index(&s.generator)
                    .expect("presentation validated its relators");
                (i, s.exponent)
            })
            .collect();
        match compiled.as_slice() {
            [] => {}
            // Generator-order relators shrink the candidate set up front.
            [(g, k)] => candidates[*g].retain(|&x| target.pow(x, *k) == target.identity()),
            _ => {
                let last = compiled.iter().map(|&(g, _)| g).max().unwrap();
                checks[last].push(compiled);
            }
        }
    }
    SearchPlan { candidates, checks }
}

/// Size of the search space left after the generator-order filters.
pub fn search_space_size(presentation: &Presentation, target: &FiniteGroup) -> f64 {
    plan(presentation, target)
        .candidates
        .iter()
        .map(|c| c.len() as f64)
        .product()
}

fn relator_holds(target: &FiniteGroup, relator: &CompiledRelator, images: &[Element]) -> bool {
    let mut acc = target.identity();
    for &(g, e) in relator {
        acc = target.mul(acc, target.pow(images[g], e));
    }
    acc == target.identity()
}

fn dfs(plan: &SearchPlan, target: &FiniteGroup, images: &mut Vec<Element>, out: &mut Vec<Vec<Element>>) {
    let depth = images.len();
    if depth == plan.candidates.len() {
        out.push(images.clone());
        return;
    }
    for &x in &plan.candidates[depth] {
        images.push(x);
        if plan.checks[depth].iter().all(|r| relator_holds(target, r, images)) {
            dfs(plan, target, images, out);
        }
        images.pop();
    }
}

/// All homomorphisms `presentation -> target`.
///
/// Depth-first over the generators in presentation order. Single-syllable
/// relators `g^k` filter candidate images before branching; every other
/// relator is checked as soon as its last generator is assigned. The first
/// level of the search tree is split across worker threads; output order is
/// the lexicographic order of image tuples regardless of scheduling.
pub fn enumerate_homs<'g>(presentation: &Presentation, target: &'g FiniteGroup) -> Vec<Homomorphism<'g>> {
    let plan = plan(presentation, target);
    let tuples: Vec<Vec<Element>> = if plan.candidates.is_empty() {
        vec![Vec::new()]
    } else {
        plan.candidates[0]
            .par_iter()
            .flat_map_iter(|&first| {
                let mut out = Vec::new();
                let mut images = vec![first];
                if plan.checks[0].iter().all(|r| relator_holds(target, r, &images)) {
                    dfs(&plan, target, &mut images, &mut out);
                }
                out
            })
            .collect()
    };
    let generators: Arc<[String]> = presentation.generators().into();
    tuples
        .into_iter()
        .map(|images| Homomorphism {
            generators: generators.clone(),
            target,
            images,
        })
        .collect()
}

/// Outcome of checking `[A, C^|H|] = 1` over all pairs of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorPowerReport {
    pub group: String,
    pub pairs_checked: usize,
    pub failures: Vec<(Element, Element)>,
}

impl CommutatorPowerReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exhaustively verify `[A, C^|H|] = 1` for every pair `(A, C)` in `H`.
/// By Lagrange `C^|H| = 1`, so any failure points at a broken group table.
pub fn commutator_power_certificate(h: &FiniteGroup) -> CommutatorPowerReport {
    let n = h.order() as i64;
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for a in h.elements() {
        for c in h.elements() {
            pairs_checked += 1;
            if h.commutator(a, h.pow(c, n)) != h.identity() {
                failures.push((a, c));
            }
        }
    }
    CommutatorPowerReport {
        group: h.name().to_string(),
        pairs_checked,
        failures,
    }
}
