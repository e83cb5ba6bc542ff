use std::collections::HashSet;

use super::{FiniteGroup, GroupError};

/// Largest order the catalog can enumerate.
pub const MAX_CATALOG_ORDER: usize = 16;

/// Default catalog bound used by the quotient experiments.
pub const DEFAULT_CATALOG_ORDER: usize = 12;

/// One representative per isomorphism class of groups of order `<= max_order`.
///
/// Named constructors (cyclic and abelian products, dihedral, dicyclic, A4,
/// products with C2) are tried first so that classes get readable names.
/// Every order is then completed with cyclic extensions `A . C_p` of the
/// already-catalogued groups of order `n / p`; all groups of order at most 16
/// are solvable, so this reaches every class. Candidates are deduplicated by
/// explicit isomorphism search.
pub fn catalog_groups(max_order: usize) -> Result<Vec<FiniteGroup>, GroupError> {
    if max_order > MAX_CATALOG_ORDER {
        return Err(GroupError::OrderTooLarge {
            requested: max_order,
            max: MAX_CATALOG_ORDER,
        });
    }
    let mut by_order: Vec<Vec<FiniteGroup>> = vec![Vec::new(); max_order + 1];
    for n in 1..=max_order {
        let mut reps: Vec<FiniteGroup> = Vec::new();
        let mut seen_tables: HashSet<Vec<Vec<usize>>> = HashSet::new();
        let mut offer = |g: FiniteGroup, reps: &mut Vec<FiniteGroup>| {
            let table: Vec<Vec<usize>> = g
                .elements()
                .map(|a| g.elements().map(|b| g.mul(a, b)).collect())
                .collect();
            if !seen_tables.insert(table) {
                return;
            }
            if !reps.iter().any(|r| r.is_isomorphic(&g)) {
                reps.push(g);
            }
        };
        for g in named_groups(n, &by_order) {
            offer(g, &mut reps);
        }
        for p in prime_factors(n) {
            let bases = by_order[n / p].clone();
            for base in &bases {
                for alpha in base.automorphisms() {
                    for top in base.elements() {
                        if !extension_data_compatible(base, p, &alpha, top) {
                            continue;
                        }
                        if let Some(g) = FiniteGroup::cyclic_extension(base, p, &alpha, top) {
                            offer(g, &mut reps);
                        }
                    }
                }
            }
        }
        disambiguate_names(&mut reps);
        by_order[n] = reps;
    }
    Ok(by_order.into_iter().flatten().collect())
}

/// Necessary conditions for `A . C_p` with `x a x^-1 = alpha(a)`, `x^p = top`:
/// `alpha(top) = top` and `alpha^p` is conjugation by `top`.
fn extension_data_compatible(base: &FiniteGroup, p: usize, alpha: &[usize], top: usize) -> bool {
    if alpha[top] != top {
        return false;
    }
    base.elements().all(|a| {
        let mut image = a;
        for _ in 0..p {
            image = alpha[image];
        }
        image == base.mul(base.mul(top, a), base.inv(top))
    })
}

fn named_groups(n: usize, smaller: &[Vec<FiniteGroup>]) -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = abelian_invariant_factors(n)
        .into_iter()
        .map(|factors| {
            let mut g = FiniteGroup::cyclic(factors[0]);
            for &d in &factors[1..] {
                g = FiniteGroup::direct_product(&g, &FiniteGroup::cyclic(d));
            }
            g
        })
        .collect();
    if n.is_multiple_of(2) && n / 2 >= 3 {
        out.push(FiniteGroup::dihedral(n / 2));
    }
    if n.is_multiple_of(4) && n / 4 >= 2 {
        out.push(FiniteGroup::dicyclic(n / 4));
    }
    if n == 12 {
        out.push(FiniteGroup::alternating4());
    }
    if n.is_multiple_of(2) {
        let c2 = FiniteGroup::cyclic(2);
        for g in smaller[n / 2].iter().filter(|g| !g.is_abelian()) {
            out.push(FiniteGroup::direct_product(g, &c2));
        }
    }
    out
}

/// Invariant factor lists `d1 >= d2 >= ...` with `d_{i+1} | d_i`, product `n`.
fn abelian_invariant_factors(n: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, bound: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 1 {
            out.push(acc.clone());
            return;
        }
        for d in (2..=remaining.min(bound)).rev() {
            if remaining.is_multiple_of(d) && bound.is_multiple_of(d) {
                acc.push(d);
                go(remaining / d, d, acc, out);
                acc.pop();
            }
        }
    }
    if n == 1 {
        return vec![vec![1]];
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn prime_factors(n: usize) -> Vec<usize> {
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            primes.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    primes
}

fn disambiguate_names(reps: &mut [FiniteGroup]) {
    for i in 0..reps.len() {
        let clashes = (0..i).filter(|&j| reps[j].name() == reps[i].name()).count();
        if clashes > 0 {
            let name = format!("{}#{}", reps[i].name(), clashes + 1);
            reps[i].set_name(name);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts_by_order(groups: &[FiniteGroup], max: usize) -> Vec<usize> {
        (1..=max)
            .map(|n| groups.iter().filter(|g| g.order() == n).count())
            .collect()
    }

    #[test]
    fn trivial_catalog() {
        let groups = catalog_groups(1).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].name(), "C1");
    }

    #[test]
    fn orders_up_to_six() {
        let groups = catalog_groups(6).unwrap();
        assert_eq!(counts_by_order(&groups, 6), vec![1, 1, 1, 2, 1, 2]);
        assert_eq!(groups.len(), 8);
    }

    #[test]
    fn orders_up_to_twelve() {
        let groups = catalog_groups(12).unwrap();
        assert_eq!(
            counts_by_order(&groups, 12),
            vec![1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5]
        );
        assert_eq!(groups.len(), 24);
        let names: Vec<&str> = groups.iter().filter(|g| g.order() == 12).map(|g| g.name()).collect();
        assert_eq!(names, ["C12", "C6xC2", "D6", "Dic3", "A4"]);
    }

    #[test]
    fn rejects_large_orders() {
        assert!(matches!(
            catalog_groups(17),
            Err(GroupError::OrderTooLarge { requested: 17, .. })
        ));
    }

    #[test]
    fn invariant_factors() {
        assert_eq!(abelian_invariant_factors(8), vec![vec![8], vec![4, 2], vec![2, 2, 2]]);
        assert_eq!(abelian_invariant_factors(12), vec![vec![12], vec![6, 2]]);
        assert_eq!(abelian_invariant_factors(16).len(), 5);
    }
}
