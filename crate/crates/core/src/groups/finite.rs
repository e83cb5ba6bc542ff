use std::collections::VecDeque;

use super::GroupError;

/// Index of an element inside a [`FiniteGroup`]. The identity is always `0`.
pub type Element = usize;

/// A finite group stored as an explicit multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<Element>,
    inverses: Vec<Element>,
    element_orders: Vec<usize>,
    signature: Vec<(usize, usize, usize)>,
}

impl FiniteGroup {
    /// Build from a full table (`table[a][b] = a * b`). Checks closure,
    /// identity at index 0, inverses and associativity.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<Element>>) -> Result<Self, GroupError> {
        let name = name.into();
        let order = table.len();
        let bad = |why: &str| GroupError::NotAGroupLaw(format!("{name}: {why}"));
        if order == 0 {
            return Err(bad("empty table"));
        }
        let mut flat = Vec::with_capacity(order * order);
        for row in &table {
            if row.len() != order {
                return Err(bad("table is not square"));
            }
            if row.iter().any(|&x| x >= order) {
                return Err(bad("entry out of range"));
            }
            flat.extend_from_slice(row);
        }
        for a in 0..order {
            if flat[a] != a || flat[a * order] != a {
                return Err(bad("index 0 is not the identity"));
            }
        }
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            let inv = (0..order).find(|&b| flat[a * order + b] == 0);
            match inv {
                Some(b) if flat[b * order + a] == 0 => inverses[a] = b,
                _ => return Err(bad("missing inverse")),
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = flat[a * order + b];
                for c in 0..order {
                    let bc = flat[b * order + c];
                    if flat[ab * order + c] != flat[a * order + bc] {
                        return Err(bad("not associative"));
                    }
                }
            }
        }
        let mut group = Self {
            name,
            order,
            table: flat,
            inverses,
            element_orders: Vec::new(),
            signature: Vec::new(),
        };
        group.element_orders = (0..order).map(|x| group.compute_order(x)).collect();
        let mut sig: Vec<_> = (0..order).map(|x| group.element_signature(x)).collect();
        sig.sort_unstable();
        group.signature = sig;
        Ok(group)
    }

    /// Build from an element list (identity first) and a multiplication rule.
    pub fn from_elements<T, F>(name: impl Into<String>, elements: &[T], mul: F) -> Result<Self, GroupError>
    where
        T: PartialEq,
        F: Fn(&T, &T) -> T,
    {
        let name = name.into();
        let index_of = |x: &T| elements.iter().position(|e| e == x);
        let mut table = Vec::with_capacity(elements.len());
        for a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for b in elements {
                let ab = mul(a, b);
                row.push(
                    index_of(&ab).ok_or_else(|| GroupError::NotAGroupLaw(format!("{name}: not closed")))?,
                );
            }
            table.push(row);
        }
        Self::from_table(name, table)
    }

    fn compute_order(&self, x: Element) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub(crate) fn set_name(&mut self, name: String) {
        self.name = name;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inverses[a]
    }

    /// Least `k >= 1` with `x^k = e`.
    #[inline]
    pub fn element_order(&self, x: Element) -> usize {
        self.element_orders[x]
    }

    pub fn pow(&self, x: Element, k: i64) -> Element {
        let ord = self.element_orders[x] as i64;
        let e = k.rem_euclid(ord);
        let mut y = 0;
        for _ in 0..e {
            y = self.mul(y, x);
        }
        y
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(&self, a: Element, b: Element) -> Element {
        let ab = self.mul(a, b);
        let ab_ainv = self.mul(ab, self.inv(a));
        self.mul(ab_ainv, self.inv(b))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    fn centralizer_size(&self, x: Element) -> usize {
        self.elements().filter(|&y| self.mul(x, y) == self.mul(y, x)).count()
    }

    /// Per-element isomorphism invariant: (element order, centralizer size,
    /// order of the square).
    fn element_signature(&self, x: Element) -> (usize, usize, usize) {
        (
            self.element_order(x),
            self.centralizer_size(x),
            self.element_order(self.mul(x, x)),
        )
    }

    /// Subgroup generated by `gens`, as a membership mask.
    fn span(&self, gens: &[Element]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Greedy small generating set, largest element orders first.
    fn generating_set(&self) -> Vec<Element> {
        let mut candidates: Vec<Element> = self.elements().skip(1).collect();
        candidates.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut covered = self.span(&gens);
        for x in candidates {
            if !covered[x] {
                gens.push(x);
                covered = self.span(&gens);
            }
        }
        gens
    }

    /// Extend `gens[i] -> images[i]` to a homomorphism into `target` by
    /// walking the Cayley graph; `None` if the assignment is inconsistent.
    fn extend_on_generators(&self, gens: &[Element], images: &[Element], target: &FiniteGroup) -> Option<Vec<Element>> {
        let mut map = vec![usize::MAX; self.order];
        map[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (&g, &t) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let image = target.mul(map[x], t);
                if map[y] == usize::MAX {
                    map[y] = image;
                    queue.push_back(y);
                } else if map[y] != image {
                    return None;
                }
            }
        }
        Some(map)
    }

    fn search_isomorphisms(&self, other: &FiniteGroup, first_only: bool) -> Vec<Vec<Element>> {
        if self.order != other.order || self.signature != other.signature {
            return Vec::new();
        }
        let gens = self.generating_set();
        let options: Vec<Vec<Element>> = gens
            .iter()
            .map(|&g| {
                let sig = self.element_signature(g);
                other.elements().filter(|&y| other.element_signature(y) == sig).collect()
            })
            .collect();
        let mut found = Vec::new();
        let mut images = Vec::with_capacity(gens.len());
        self.iso_dfs(other, &gens, &options, &mut images, first_only, &mut found);
        found
    }

    fn iso_dfs(
        &self,
        other: &FiniteGroup,
        gens: &[Element],
        options: &[Vec<Element>],
        images: &mut Vec<Element>,
        first_only: bool,
        found: &mut Vec<Vec<Element>>,
    ) {
        if first_only && !found.is_empty() {
            return;
        }
        let depth = images.len();
        if depth == gens.len() {
            if let Some(map) = self.extend_on_generators(gens, images, other) {
                let mut hit = vec![false; other.order];
                if map.iter().all(|&y| !std::mem::replace(&mut hit[y], true)) {
                    found.push(map);
                }
            }
            return;
        }
        for &y in &options[depth] {
            images.push(y);
            // Prune: the partial assignment must already extend consistently.
            if self
                .extend_on_generators(&gens[..=depth], images, other)
                .is_some()
            {
                self.iso_dfs(other, gens, options, images, first_only, found);
            }
            images.pop();
        }
    }

    /// An isomorphism `self -> other` as an element map, if one exists.
    pub fn isomorphism(&self, other: &FiniteGroup) -> Option<Vec<Element>> {
        self.search_isomorphisms(other, true).into_iter().next()
    }

    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        self.isomorphism(other).is_some()
    }

    /// All automorphisms as element maps.
    pub fn automorphisms(&self) -> Vec<Vec<Element>> {
        self.search_isomorphisms(self, false)
    }

    // --- constructors -------------------------------------------------------

    pub fn cyclic(n: usize) -> Self {
        let elements: Vec<usize> = (0..n).collect();
        Self::from_elements(format!("C{n}"), &elements, |a, b| (a + b) % n)
            .expect("cyclic group law")
    }

    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let elements: Vec<(usize, usize)> = g
            .elements()
            .flat_map(|a| h.elements().map(move |b| (a, b)))
            .collect();
        Self::from_elements(format!("{}x{}", g.name, h.name), &elements, |x, y| {
            (g.mul(x.0, y.0), h.mul(x.1, y.1))
        })
        .expect("direct product group law")
    }

    /// Dihedral group of order `2n`: `<r, s | r^n, s^2, s r s^-1 = r^-1>`.
    pub fn dihedral(n: usize) -> Self {
        let elements: Vec<(usize, usize)> = (0..2)
            .flat_map(|e| (0..n).map(move |i| (i, e)))
            .collect();
        Self::from_elements(format!("D{n}"), &elements, |&(i, e), &(j, f)| {
            let j = if e == 1 { (n - j) % n } else { j };
            ((i + j) % n, (e + f) % 2)
        })
        .expect("dihedral group law")
    }

    /// Dicyclic group of order `4n`: `<a, x | a^2n, x^2 = a^n, x a x^-1 = a^-1>`.
    pub fn dicyclic(n: usize) -> Self {
        let m = 2 * n;
        let elements: Vec<(usize, usize)> = (0..2)
            .flat_map(|e| (0..m).map(move |i| (i, e)))
            .collect();
        let name = if n == 2 { "Q8".to_string() } else if n == 4 { "Q16".to_string() } else { format!("Dic{n}") };
        Self::from_elements(name, &elements, |&(i, e), &(j, f)| {
            if e == 0 {
                ((i + j) % m, f)
            } else {
                let i2 = (i + m - j) % m;
                if f == 1 {
                    ((i2 + n) % m, 0)
                } else {
                    (i2, 1)
                }
            }
        })
        .expect("dicyclic group law")
    }

    /// Alternating group on four points.
    pub fn alternating4() -> Self {
        let mut perms: Vec<[usize; 4]> = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
                        if distinct && parity(&p) == 0 {
                            perms.push(p);
                        }
                    }
                }
            }
        }
        Self::from_elements("A4", &perms, |p, q| [p[q[0]], p[q[1]], p[q[2]], p[q[3]]])
            .expect("A4 group law")
    }

    /// Cyclic extension `base . C_p` with `x a x^-1 = alpha(a)` and
    /// `x^p = top`. Returns `None` when the data do not define a group.
    pub fn cyclic_extension(base: &FiniteGroup, p: usize, alpha: &[Element], top: Element) -> Option<Self> {
        let n = base.order;
        let mut alpha_inv = vec![0; n];
        for (a, &b) in alpha.iter().enumerate() {
            alpha_inv[b] = a;
        }
        // alpha^{-j} for j in 0..p
        let mut inv_powers: Vec<Vec<Element>> = vec![(0..n).collect()];
        for j in 1..p {
            let prev = &inv_powers[j - 1];
            inv_powers.push(prev.iter().map(|&a| alpha_inv[a]).collect());
        }
        let mut table = vec![vec![0; n * p]; n * p];
        for i in 0..p {
            for a in 0..n {
                for j in 0..p {
                    for b in 0..n {
                        let twisted = base.mul(inv_powers[j][a], b);
                        let (k, c) = if i + j >= p {
                            (i + j - p, base.mul(top, twisted))
                        } else {
                            (i + j, twisted)
                        };
                        table[i * n + a][j * n + b] = k * n + c;
                    }
                }
            }
        }
        let split = if top == 0 { ":" } else { "." };
        Self::from_table(format!("{}{split}C{p}", base.name), table).ok()
    }
}

fn parity(p: &[usize]) -> usize {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}
