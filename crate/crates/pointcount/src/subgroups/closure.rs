//! Closure computations in powers of a finite group: conjugation-orbit
//! closures, exhaustive intermediate-subgroup enumeration between the
//! diagonal and the full power, and the central-quotient comparison.
//!
//! Tuples in `H^r` are packed base-`|H|` into `u64` indices, so subgroup
//! membership is a flat bitmap and closures are work-queue breadth-first
//! searches.

use super::group::FiniteGroup;
use super::partition::{bell, Partition};
use crate::{Error, Result};

const MAX_POWER: u128 = 100_000_000;

/// An element of `H^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTuple {
    coords: Vec<u16>,
}

impl GroupTuple {
    pub fn new(h: &FiniteGroup, coords: Vec<u16>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidConfig("tuple must have n >= 1".into()));
        }
        if let Some(&bad) = coords.iter().find(|&&c| c as usize >= h.order()) {
            return Err(Error::InvalidConfig(format!(
                "tuple coordinate {bad} out of range for order {}",
                h.order()
            )));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[u16] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Number of distinct coordinate values: the block count of the equality
/// partition.
pub fn rank(t: &GroupTuple) -> usize {
    Partition::from_equality_pattern(&t.coords).block_count()
}

/// Lemma hypothesis check: every coordinate and every pairwise quotient
/// `x_i x_j^-1` is noncentral.
pub fn tuple_validity(h: &FiniteGroup, t: &GroupTuple) -> bool {
    t.coords.iter().all(|&x| !h.is_central(x))
        && t.coords.iter().enumerate().all(|(i, &x)| {
            t.coords[i + 1..]
                .iter()
                .all(|&y| !h.is_central(h.mul(x, h.inv(y))))
        })
}

fn power_guard(h: &FiniteGroup, r: usize) -> Result<u64> {
    let size = (h.order() as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if r < 1 || size > MAX_POWER {
        return Err(Error::ResourceGuard {
            what: "|H|^r",
            got: size,
            limit: MAX_POWER,
        });
    }
    Ok(size as u64)
}

fn pack(order: u64, coords: &[u16]) -> u64 {
    coords.iter().fold(0, |acc, &c| acc * order + c as u64)
}

fn unpack(order: u64, r: usize, mut packed: u64) -> Vec<u16> {
    let mut coords = vec![0u16; r];
    for slot in coords.iter_mut().rev() {
        *slot = (packed % order) as u16;
        packed /= order;
    }
    coords
}

/// A subgroup of `H^r` as a sorted list of packed tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    r: usize,
    group_order: u64,
    elements: Vec<u64>,
}

impl Subgroup {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, h: &FiniteGroup, t: &GroupTuple) -> bool {
        self.elements
            .binary_search(&pack(h.order() as u64, &t.coords))
            .is_ok()
    }

    pub fn tuples(&self, r: usize) -> impl Iterator<Item = Vec<u16>> + '_ {
        let order = self.group_order;
        self.elements.iter().map(move |&e| unpack(order, r, e))
    }

    /// Equality partition induced by the subgroup: coordinates `i, j` fall
    /// in one block iff every member agrees there.
    pub fn induced_partition(&self) -> Partition {
        let mut representative: Vec<Vec<u16>> = Vec::new();
        // two coordinates separate iff some member separates them; the
        // pattern of the pointwise "separation witness" columns decides
        let columns: Vec<Vec<u16>> = (0..self.r)
            .map(|i| {
                self.elements
                    .iter()
                    .map(|&e| unpack(self.group_order, self.r, e)[i])
                    .collect()
            })
            .collect();
        representative.extend(columns);
        Partition::from_equality_pattern(&representative)
    }

    /// Admissibility: the subgroup equals the full block-diagonal of its
    /// induced partition, detected by the order `|H|^blocks`.
    pub fn is_admissible(&self, h: &FiniteGroup) -> bool {
        let blocks = self.induced_partition().block_count();
        self.order() as u128 == (h.order() as u128).pow(blocks as u32)
    }
}

/// Closure of `seeds` under multiplication in `H^r`, with the generator set
/// `generators` (packed); breadth-first over a flat membership bitmap.
fn close(h: &FiniteGroup, size: u64, r: usize, generators: &[Vec<u16>]) -> Vec<u64> {
    let order = h.order() as u64;
    let mut member = vec![false; size as usize];
    let id = pack(order, &vec![h.identity(); r]);
    member[id as usize] = true;
    let mut elements = vec![id];
    let mut head = 0;
    let mut coords = vec![0u16; r];
    while head < elements.len() {
        let mut rest = elements[head];
        head += 1;
        for slot in coords.iter_mut().rev() {
            *slot = (rest % order) as u16;
            rest /= order;
        }
        for g in generators {
            let mut product = 0u64;
            for (i, &b) in g.iter().enumerate() {
                product = product * order + h.mul(coords[i], b) as u64;
            }
            if !member[product as usize] {
                member[product as usize] = true;
                elements.push(product);
            }
        }
    }
    elements.sort_unstable();
    elements
}

/// Subgroup of `H^r` generated by the full conjugation orbit
/// `{(d x_1 d^-1, ..., d x_r d^-1) : d in H}` of `t`.
pub fn goursat_closure(h: &FiniteGroup, t: &GroupTuple) -> Result<Subgroup> {
    let r = t.len();
    let size = power_guard(h, r)?;
    let mut generators: Vec<Vec<u16>> = (0..h.order() as u16)
        .map(|d| t.coords.iter().map(|&x| h.conjugate(d, x)).collect())
        .collect();
    generators.sort_unstable();
    generators.dedup();
    Ok(Subgroup {
        r,
        group_order: h.order() as u64,
        elements: close(h, size, r, &generators),
    })
}

/// An intermediate subgroup between the diagonal and the full power,
/// tagged with its admissibility verdict.
#[derive(Debug, Clone)]
pub struct IntermediateSubgroup {
    pub subgroup: Subgroup,
    pub partition: Partition,
    pub admissible: bool,
}

fn diagonal_generators(h: &FiniteGroup, n: usize) -> Vec<Vec<u16>> {
    h.small_generating_set()
        .into_iter()
        .map(|g| vec![g; n])
        .collect()
}

/// Exhaustively enumerates the subgroups `M` with `diag(H) <= M <= H^n`:
/// closes `diag union {g}` over diagonal-double-coset representatives `g`,
/// then closes the family under pairwise join. Each subgroup is tested
/// against the block-diagonal pattern of a partition.
pub fn intermediate_subgroups(h: &FiniteGroup, n: usize) -> Result<Vec<IntermediateSubgroup>> {
    let size = power_guard(h, n)?;
    if h.order() == 60 && n > 3 {
        return Err(Error::ResourceGuard {
            what: "power n at order 60",
            got: n as u128,
            limit: 3,
        });
    }
    let order = h.order() as u64;
    let diag_gens = diagonal_generators(h, n);
    // each family member keeps the non-diagonal generators that produced
    // it, so joins are closures over merged generator lists
    let mut family: Vec<(Vec<u64>, Vec<Vec<u16>>)> =
        vec![(close(h, size, n, &diag_gens), Vec::new())];
    // one closure per (diag, diag) double coset; closures are constant on
    // double cosets since d1 g d2 and g generate the same overgroup of diag
    let mut visited = vec![false; size as usize];
    for packed in family[0].0.iter() {
        visited[*packed as usize] = true;
    }
    for rep in 0..size {
        if visited[rep as usize] {
            continue;
        }
        let coords = unpack(order, n, rep);
        for d1 in 0..h.order() as u16 {
            let left: Vec<u16> = coords.iter().map(|&x| h.mul(d1, x)).collect();
            for d2 in 0..h.order() as u16 {
                let both: Vec<u16> = left.iter().map(|&x| h.mul(x, d2)).collect();
                visited[pack(order, &both) as usize] = true;
            }
        }
        let mut generators = diag_gens.clone();
        generators.push(coords.clone());
        let closure = close(h, size, n, &generators);
        if !family.iter().any(|(m, _)| *m == closure) {
            family.push((closure, vec![coords]));
        }
    }
    loop {
        let mut grew = false;
        let snapshot = family.clone();
        for (a, (ma, ga)) in snapshot.iter().enumerate() {
            for (mb, gb) in snapshot[a + 1..].iter() {
                if ma.iter().all(|e| mb.binary_search(e).is_ok())
                    || mb.iter().all(|e| ma.binary_search(e).is_ok())
                {
                    continue;
                }
                let mut generators = diag_gens.clone();
                let extra: Vec<Vec<u16>> = ga.iter().chain(gb).cloned().collect();
                generators.extend(extra.iter().cloned());
                let join = close(h, size, n, &generators);
                if !family.iter().any(|(m, _)| *m == join) {
                    family.push((join, extra));
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<IntermediateSubgroup> = family
        .into_iter()
        .map(|(elements, _)| {
            let subgroup = Subgroup {
                r: n,
                group_order: order,
                elements,
            };
            let partition = subgroup.induced_partition();
            let admissible = subgroup.is_admissible(h);
            IntermediateSubgroup {
                subgroup,
                partition,
                admissible,
            }
        })
        .collect();
    out.sort_by_key(|m| m.subgroup.order());
    debug_assert!(out.len() as u64 <= bell(n) || out.iter().any(|m| !m.admissible));
    Ok(out)
}

/// Closure upstairs versus in the central quotient: the index of the
/// upstairs closure in the full preimage of the downstairs closure.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CentralComparison {
    pub center_order: usize,
    pub upstairs_order: usize,
    pub quotient_closure_order: usize,
    /// `|closure downstairs| * |Z|^r / |closure upstairs|`.
    pub preimage_index: u64,
}

pub fn central_closure_comparison(h: &FiniteGroup, t: &GroupTuple) -> Result<CentralComparison> {
    let upstairs = goursat_closure(h, t)?;
    let (quotient, projection) = h.central_quotient();
    let image = GroupTuple::new(
        &quotient,
        t.coords().iter().map(|&x| projection[x as usize]).collect(),
    )?;
    let downstairs = goursat_closure(&quotient, &image)?;
    let preimage =
        downstairs.order() as u64 * (h.center().len() as u64).pow(t.len() as u32);
    Ok(CentralComparison {
        center_order: h.center().len(),
        upstairs_order: upstairs.order(),
        quotient_closure_order: downstairs.order(),
        preimage_index: preimage / upstairs.order() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::group::{alternating_5, psl_2_7, special_linear_2_5};

    fn tuple(h: &FiniteGroup, coords: &[u16]) -> GroupTuple {
        GroupTuple::new(h, coords.to_vec()).unwrap()
    }

    #[test]
    fn rank_counts_distinct_coordinates() {
        let h = alternating_5();
        assert_eq!(rank(&tuple(&h, &[5, 5, 5])), 1);
        assert_eq!(rank(&tuple(&h, &[5, 9, 5])), 2);
        assert_eq!(rank(&tuple(&h, &[1, 2, 3, 2])), 3);
    }

    #[test]
    fn rank_invariant_under_diagonal_translation_and_permutation() {
        let h = alternating_5();
        let t = tuple(&h, &[3, 17, 3, 29]);
        let base = rank(&t);
        for d in [1u16, 13, 44] {
            let translated: Vec<u16> = t.coords().iter().map(|&x| h.mul(x, d)).collect();
            assert_eq!(rank(&tuple(&h, &translated)), base);
        }
        assert_eq!(rank(&tuple(&h, &[29, 3, 17, 3])), base);
    }

    #[test]
    fn tuple_validity_examples() {
        let h = alternating_5();
        let e = h.identity();
        let g = (0..60u16).find(|&x| x != e).unwrap();
        let k = (0..60u16).find(|&x| x != e && x != g).unwrap();
        assert!(!tuple_validity(&h, &tuple(&h, &[e, g])));
        assert!(!tuple_validity(&h, &tuple(&h, &[g, g])));
        assert!(tuple_validity(&h, &tuple(&h, &[g, k])));
    }

    #[test]
    fn r1_closure_is_whole_simple_group() {
        let h = alternating_5();
        let g = (0..60u16).find(|&x| x != h.identity()).unwrap();
        let closure = goursat_closure(&h, &tuple(&h, &[g])).unwrap();
        assert_eq!(closure.order(), 60);
    }

    #[test]
    fn diagonal_tuple_closure_is_diagonal() {
        let h = alternating_5();
        let g = (0..60u16).find(|&x| x != h.identity()).unwrap();
        let closure = goursat_closure(&h, &tuple(&h, &[g, g])).unwrap();
        assert_eq!(closure.order(), 60);
        for coords in closure.tuples(2) {
            assert_eq!(coords[0], coords[1]);
        }
    }

    #[test]
    fn valid_pairs_close_to_full_square() {
        // exhaustive over pairs of nonidentity elements up to conjugacy:
        // one representative per conjugacy class in the first slot
        let h = alternating_5();
        let e = h.identity();
        let mut class_rep = vec![u16::MAX; 60];
        for x in 0..60u16 {
            let rep = (0..60u16).map(|d| h.conjugate(d, x)).min().unwrap();
            class_rep[x as usize] = rep;
        }
        let reps: Vec<u16> = {
            let mut r: Vec<u16> = class_rep.clone();
            r.sort_unstable();
            r.dedup();
            r
        };
        for &x in reps.iter().filter(|&&x| x != e) {
            for y in (0..60u16).filter(|&y| y != e && y != x) {
                let t = tuple(&h, &[x, y]);
                assert!(tuple_validity(&h, &t));
                let closure = goursat_closure(&h, &t).unwrap();
                assert_eq!(closure.order(), 3600, "pair ({x}, {y})");
            }
        }
    }

    #[test]
    fn psl27_valid_pair_closes_to_full_square() {
        let h = psl_2_7();
        let e = h.identity();
        let x = (0..168u16).find(|&x| x != e).unwrap();
        let y = (0..168u16).find(|&y| y != e && y != x).unwrap();
        let closure = goursat_closure(&h, &tuple(&h, &[x, y])).unwrap();
        assert_eq!(closure.order(), 168 * 168);
    }

    #[test]
    fn closure_is_a_subgroup_containing_the_orbit() {
        let h = alternating_5();
        let t = tuple(&h, &[7, 23, 41]);
        let closure = goursat_closure(&h, &t).unwrap();
        for d in 0..60u16 {
            let conj: Vec<u16> = t.coords().iter().map(|&x| h.conjugate(d, x)).collect();
            assert!(closure.contains(&h, &tuple(&h, &conj)));
        }
        // subgroup axioms on a sample of elements
        let members: Vec<Vec<u16>> = closure.tuples(3).step_by(997).collect();
        for a in &members {
            let inv: Vec<u16> = a.iter().map(|&x| h.inv(x)).collect();
            assert!(closure.contains(&h, &tuple(&h, &inv)));
            for b in &members {
                let prod: Vec<u16> = a.iter().zip(b).map(|(&x, &y)| h.mul(x, y)).collect();
                assert!(closure.contains(&h, &tuple(&h, &prod)));
            }
        }
    }

    #[test]
    fn a5_intermediate_subgroups_n2() {
        let h = alternating_5();
        let found = intermediate_subgroups(&h, 2).unwrap();
        assert_eq!(found.len(), 2);
        assert_eq!(found[0].subgroup.order(), 60);
        assert_eq!(found[1].subgroup.order(), 3600);
        assert!(found.iter().all(|m| m.admissible));
        assert_eq!(found[0].partition.block_count(), 1);
        assert_eq!(found[1].partition.block_count(), 2);
    }

    #[test]
    fn n1_gives_the_group_itself() {
        let h = alternating_5();
        let found = intermediate_subgroups(&h, 1).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].subgroup.order(), 60);
        assert!(found[0].admissible);
    }

    #[test]
    fn central_comparison_sl25() {
        let h = special_linear_2_5();
        let e = h.identity();
        // a noncentral valid pair
        let x = (0..120u16)
            .find(|&x| !h.is_central(x))
            .unwrap();
        let y = (0..120u16)
            .find(|&y| !h.is_central(y) && !h.is_central(h.mul(x, h.inv(y))))
            .unwrap();
        assert_ne!(x, e);
        let t = tuple(&h, &[x, y]);
        let report = central_closure_comparison(&h, &t).unwrap();
        assert_eq!(report.center_order, 2);
        assert_eq!(report.quotient_closure_order, 3600);
        // the upstairs closure sits inside the preimage with finite index
        assert_eq!(
            report.preimage_index as usize * report.upstairs_order,
            report.quotient_closure_order * 4
        );
        assert!(report.preimage_index >= 1);
    }

    #[test]
    fn power_guard_enforced() {
        let h = psl_2_7();
        let t = GroupTuple::new(&h, vec![1, 2, 3, 4, 5]).unwrap();
        assert!(matches!(
            goursat_closure(&h, &t),
            Err(Error::ResourceGuard { .. })
        ));
    }
}
