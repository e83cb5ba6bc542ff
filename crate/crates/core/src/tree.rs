//! The rooted binary tree, the presentations of its truncations, level
//! rewriting onto the leaves, and the one-relator family used for the
//! torsion-free example.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::groups::{Presentation, Word};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("the root carries no generator")]
    RootHasNoGenerator,
    #[error("depth must be at least 1, got {0}")]
    DepthTooSmall(usize),
    #[error("vertex `{vertex}` is outside levels 1..={level}")]
    OutOfRange { vertex: String, level: usize },
    #[error("invalid vertex address `{0}` (expected digits 1 and 2)")]
    InvalidAddress(String),
    #[error("`{0}` is not a tree generator name")]
    NotAGenerator(String),
}

/// A vertex of the rooted binary tree, as the path of child choices from
/// the root (`1` or `2` per step). The root is the empty path.
///
/// Ordering is lexicographic on the path, so the root sorts first and each
/// subtree is contiguous.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexAddress(Vec<u8>);

impl VertexAddress {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn from_path(path: &[u8]) -> Result<Self, TreeError> {
        if path.iter().all(|&d| d == 1 || d == 2) {
            Ok(Self(path.to_vec()))
        } else {
            Err(TreeError::InvalidAddress(format!("{path:?}")))
        }
    }

    pub fn path(&self) -> &[u8] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Child `v·i` for `i` in {1, 2}.
    pub fn child(&self, i: u8) -> Self {
        debug_assert!(i == 1 || i == 2);
        let mut path = self.0.clone();
        path.push(i);
        Self(path)
    }

    pub fn parent(&self) -> Option<Self> {
        if self.is_root() {
            None
        } else {
            Some(Self(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// First step of the path: which root subtree the vertex lies in.
    pub fn root_subtree(&self) -> Option<u8> {
        self.0.first().copied()
    }

    /// Generator name `g<digits>`, e.g. `g12`.
    pub fn generator_name(&self) -> Result<String, TreeError> {
        if self.is_root() {
            return Err(TreeError::RootHasNoGenerator);
        }
        Ok(format!("g{self}"))
    }

    pub fn from_generator_name(name: &str) -> Result<Self, TreeError> {
        let digits = name
            .strip_prefix('g')
            .ok_or_else(|| TreeError::NotAGenerator(name.to_string()))?;
        let v: VertexAddress = digits
            .parse()
            .map_err(|_| TreeError::NotAGenerator(name.to_string()))?;
        if v.is_root() {
            return Err(TreeError::NotAGenerator(name.to_string()));
        }
        Ok(v)
    }

    /// All vertices at exactly `depth`, in lexicographic order.
    pub fn all_at_depth(depth: usize) -> Vec<Self> {
        let mut level = vec![Self::root()];
        for _ in 0..depth {
            level = level.iter().flat_map(|v| [v.child(1), v.child(2)]).collect();
        }
        level
    }

    /// All vertices with `1 <= depth <= n`, shallow levels first.
    pub fn all_up_to(n: usize) -> Vec<Self> {
        (1..=n).flat_map(Self::all_at_depth).collect()
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for VertexAddress {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(TreeError::InvalidAddress(s.to_string())),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Self)
    }
}

/// Order of the generator `g_v`: `3 + depth(v)`.
pub fn generator_order(v: &VertexAddress) -> Result<u32, TreeError> {
    if v.is_root() {
        return Err(TreeError::RootHasNoGenerator);
    }
    Ok(3 + v.depth() as u32)
}

fn check_depth(n: usize) -> Result<(), TreeError> {
    if n < 1 {
        Err(TreeError::DepthTooSmall(n))
    } else {
        Ok(())
    }
}

fn gen(v: &VertexAddress) -> String {
    format!("g{v}")
}

/// Presentation of the truncation with all generators `g_v`, `1 <= |v| <= n`.
///
/// Relators: `g_v^(3+|v|)` for every generator, then `g_v g_{v1}^-1 g_{v2}^-1`
/// (i.e. `g_v = g_{v2} g_{v1}`) for every `v` with `|v| <= n - 1`.
pub fn presentation_full(n: usize) -> Result<Presentation, TreeError> {
    check_depth(n)?;
    let vertices = VertexAddress::all_up_to(n);
    let generators = vertices.iter().map(gen).collect();
    let mut relators: Vec<Word> = vertices
        .iter()
        .map(|v| Word::power_of(gen(v), 3 + v.depth() as i64))
        .collect();
    for v in vertices.iter().filter(|v| v.depth() < n) {
        let mut w = Word::generator(gen(v));
        w.push(gen(&v.child(1)), -1);
        w.push(gen(&v.child(2)), -1);
        relators.push(w);
    }
    Ok(Presentation::new(generators, relators).expect("tree presentation is well formed"))
}

/// The word over the depth-`n` generators that equals `g_v`, obtained by
/// iterating `g_w -> g_{w2} g_{w1}`.
pub fn expand_to_level(v: &VertexAddress, n: usize) -> Result<Word, TreeError> {
    if v.is_root() || v.depth() > n {
        return Err(TreeError::OutOfRange {
            vertex: v.to_string(),
            level: n,
        });
    }
    let mut leaves = vec![v.clone()];
    for _ in v.depth()..n {
        leaves = leaves.iter().flat_map(|w| [w.child(2), w.child(1)]).collect();
    }
    let mut word = Word::identity();
    for leaf in &leaves {
        word.push(gen(leaf), 1);
    }
    Ok(word)
}

/// Tietze-equivalent presentation on the `2^n` leaf generators: for every
/// vertex `v` with `1 <= |v| <= n`, the relator `expand_to_level(v, n)^(3+|v|)`.
/// Relators are listed deepest level first.
pub fn presentation_leaf(n: usize) -> Result<Presentation, TreeError> {
    check_depth(n)?;
    let generators = VertexAddress::all_at_depth(n).iter().map(gen).collect();
    let mut relators = Vec::new();
    for depth in (1..=n).rev() {
        for v in VertexAddress::all_at_depth(depth) {
            let w = expand_to_level(&v, n)?;
            let k = 3 + depth as i64;
            relators.push(if w.syllable_count() == 1 {
                Word::power_of(gen(&v), k)
            } else {
                w.pow(k)
            });
        }
    }
    Ok(Presentation::new(generators, relators).expect("leaf presentation is well formed"))
}

/// Both views of the truncation of depth `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePresentationScheme {
    depth: usize,
}

impl TreePresentationScheme {
    pub fn new(depth: usize) -> Result<Self, TreeError> {
        check_depth(depth)?;
        Ok(Self { depth })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn full(&self) -> Presentation {
        presentation_full(self.depth).expect("depth validated")
    }

    pub fn leaf(&self) -> Presentation {
        presentation_leaf(self.depth).expect("depth validated")
    }
}

/// Checks the alternating normal form used by [`sample_alternating_words`]:
/// every syllable is `g_v^k` with `|v| <= n` and `1 <= k < 3 + |v|`, and
/// consecutive syllables come from different root subtrees.
pub fn is_alternating(word: &Word, n: usize) -> bool {
    let mut previous: Option<u8> = None;
    for s in word.syllables() {
        let Ok(v) = VertexAddress::from_generator_name(&s.generator) else {
            return false;
        };
        let order = 3 + v.depth() as i64;
        if v.depth() > n || s.exponent < 1 || s.exponent >= order {
            return false;
        }
        let side = v.root_subtree();
        if previous == side {
            return false;
        }
        previous = side;
    }
    !word.is_empty()
}

/// Random words in alternating normal form for the splitting of the depth-`n`
/// truncation into its two root subtrees (no relator mixes them, so the group
/// is their free product). Each word has between 1 and `max_syllables`
/// syllables, hence is nontrivial.
pub fn sample_alternating_words(n: usize, count: usize, max_syllables: usize, seed: u64) -> Vec<Word> {
    assert!(n >= 1 && max_syllables >= 1);
    let mut rng = rng::stream(seed, "tree/alternating-words");
    let sides: [Vec<VertexAddress>; 2] = [1u8, 2].map(|side| {
        VertexAddress::all_up_to(n)
            .into_iter()
            .filter(|v| v.root_subtree() == Some(side))
            .collect()
    });
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_syllables);
            let mut side = rng.gen_range(0..2usize);
            let mut word = Word::identity();
            for _ in 0..len {
                let pool = &sides[side];
                let v = &pool[rng.gen_range(0..pool.len())];
                let k = rng.gen_range(1..3 + v.depth() as i64);
                word.push(gen(v), k);
                side = 1 - side;
            }
            word
        })
        .collect()
}

/// `<a, b, c | b = c^n>` together with the boundary word `[a, b]` and its
/// rewrite `[a, c^n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MnPresentation {
    pub presentation: Presentation,
    pub witness: Word,
    pub rewrite: Word,
}

pub fn mn_presentation(n: usize) -> Result<MnPresentation, TreeError> {
    check_depth(n)?;
    let mut relator = Word::generator("b");
    relator.push("c", -(n as i64));
    let presentation = Presentation::new(vec!["a".into(), "b".into(), "c".into()], vec![relator])
        .expect("one-relator presentation is well formed");
    let a = Word::generator("a");
    let witness = Word::commutator(&a, &Word::generator("b"));
    let rewrite = Word::commutator(&a, &Word::power_of("c", n as i64));
    Ok(MnPresentation {
        presentation,
        witness,
        rewrite,
    })
}
