//! Multiplication-table groups with axiom checks, built-in small simple
//! groups, and loaders for permutation generators and table files.

use std::collections::HashMap;

use crate::{Error, Result};

/// Version token of the multiplication-table file format.
pub const GROUP_TABLE_FORMAT: &str = "pointcount-group-v1";

/// A finite group as a full multiplication table over indices `0..order`.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    identity: u16,
    center: Vec<u16>,
}

impl FiniteGroup {
    /// Validates the table as a group: closure, identity, inverses,
    /// associativity. The center is computed by brute force.
    pub fn from_table(table: Vec<Vec<u16>>) -> Result<Self> {
        let order = table.len();
        if order == 0 || order > u16::MAX as usize {
            return Err(Error::NotAGroup(format!("unsupported order {order}")));
        }
        let mut mul = Vec::with_capacity(order * order);
        for row in &table {
            if row.len() != order {
                return Err(Error::NotAGroup("table is not square".into()));
            }
            for &x in row {
                if x as usize >= order {
                    return Err(Error::NotAGroup(format!("entry {x} out of range")));
                }
                mul.push(x);
            }
        }
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let mut inv = vec![u16::MAX; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {a} has no inverse")))?;
            inv[a] = b as u16;
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let center = (0..order)
            .filter(|&z| (0..order).all(|a| at(z, a) == at(a, z)))
            .map(|z| z as u16)
            .collect();
        Ok(Self {
            order,
            mul,
            inv,
            identity: identity as u16,
            center,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn identity(&self) -> u16 {
        self.identity
    }

    /// Sorted indices of the central elements.
    pub fn center(&self) -> &[u16] {
        &self.center
    }

    pub fn is_central(&self, a: u16) -> bool {
        self.center.binary_search(&a).is_ok()
    }

    pub fn conjugate(&self, d: u16, x: u16) -> u16 {
        self.mul(self.mul(d, x), self.inv(d))
    }

    /// Small generating set found greedily; used to keep closure breadth
    /// searches cheap.
    pub fn small_generating_set(&self) -> Vec<u16> {
        let mut gens: Vec<u16> = Vec::new();
        let mut span = vec![false; self.order];
        span[self.identity as usize] = true;
        let mut span_size = 1usize;
        for candidate in 0..self.order as u16 {
            if span[candidate as usize] {
                continue;
            }
            gens.push(candidate);
            // re-close the span with the enlarged generator set
            let mut queue: Vec<u16> = (0..self.order as u16)
                .filter(|&x| span[x as usize])
                .collect();
            while let Some(x) = queue.pop() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !span[y as usize] {
                        span[y as usize] = true;
                        span_size += 1;
                        queue.push(y);
                    }
                }
            }
            if span_size == self.order {
                break;
            }
        }
        gens
    }

    /// Group from permutation generators acting on `0..degree`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree {
                return Err(Error::GroupParse("generator degree mismatch".into()));
            }
            for &image in g {
                if image >= degree || seen[image] {
                    return Err(Error::GroupParse("generator is not a permutation".into()));
                }
                seen[image] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut index: HashMap<Vec<usize>, u16> = HashMap::new();
        let mut elements = vec![id.clone()];
        index.insert(id, 0);
        let mut head = 0;
        while head < elements.len() {
            let current = elements[head].clone();
            head += 1;
            for g in generators {
                let product: Vec<usize> = (0..degree).map(|i| g[current[i]]).collect();
                if !index.contains_key(&product) {
                    if elements.len() >= u16::MAX as usize {
                        return Err(Error::ResourceGuard {
                            what: "group order",
                            got: elements.len() as u128,
                            limit: u16::MAX as u128,
                        });
                    }
                    index.insert(product.clone(), elements.len() as u16);
                    elements.push(product);
                }
            }
        }
        let order = elements.len();
        let mut table = vec![vec![0u16; order]; order];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                let product: Vec<usize> = (0..degree).map(|i| pa[pb[i]]).collect();
                table[a][b] = index[&product];
            }
        }
        Self::from_table(table)
    }

    /// Parses generators in cycle notation, one generator per `;` or
    /// newline: `(1 2 3 4 5); (3 4 5)`. Points are 1-based; commas and
    /// spaces both separate points.
    pub fn from_cycle_notation(text: &str) -> Result<Self> {
        let mut generators_cycles: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut degree = 0usize;
        for chunk in text.split([';', '\n']) {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let mut cycles = Vec::new();
            let mut rest = chunk;
            while let Some(open) = rest.find('(') {
                let close = rest[open..]
                    .find(')')
                    .ok_or_else(|| Error::GroupParse(format!("unbalanced cycle in `{chunk}`")))?
                    + open;
                let cycle: Vec<usize> = rest[open + 1..close]
                    .split([',', ' '])
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .ok()
                            .filter(|&p| p >= 1)
                            .ok_or_else(|| Error::GroupParse(format!("bad point `{s}`")))
                    })
                    .collect::<Result<_>>()?;
                for &p in &cycle {
                    degree = degree.max(p);
                }
                cycles.push(cycle);
                rest = &rest[close + 1..];
            }
            if cycles.is_empty() {
                return Err(Error::GroupParse(format!("no cycles in `{chunk}`")));
            }
            generators_cycles.push(cycles);
        }
        if generators_cycles.is_empty() {
            return Err(Error::GroupParse("no generators given".into()));
        }
        let generators: Vec<Vec<usize>> = generators_cycles
            .iter()
            .map(|cycles| {
                let mut perm: Vec<usize> = (0..degree).collect();
                for cycle in cycles {
                    for w in 0..cycle.len() {
                        perm[cycle[w] - 1] = cycle[(w + 1) % cycle.len()] - 1;
                    }
                }
                perm
            })
            .collect();
        Self::from_permutations(degree, &generators)
    }

    /// Parses the line-oriented table format: a versioned header
    /// `pointcount-group-v1 <order>`, then `order` rows of `order` indices.
    pub fn from_table_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::GroupParse("empty table file".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(GROUP_TABLE_FORMAT) {
            return Err(Error::GroupParse(format!("bad header `{header}`")));
        }
        let order: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::GroupParse(format!("bad header `{header}`")))?;
        let table: Vec<Vec<u16>> = lines
            .map(|line| {
                line.split_whitespace()
                    .map(|s| {
                        s.parse::<u16>()
                            .map_err(|_| Error::GroupParse(format!("bad index `{s}`")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        if table.len() != order {
            return Err(Error::GroupParse(format!(
                "header promises {order} rows, found {}",
                table.len()
            )));
        }
        Self::from_table(table)
    }

    /// Serializes in the table file format.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{} {}\n", GROUP_TABLE_FORMAT, self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order)
                .map(|b| self.mul[a * self.order + b].to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Quotient by the center, with the projection map `element -> coset
    /// index`.
    pub fn central_quotient(&self) -> (FiniteGroup, Vec<u16>) {
        let mut coset_of = vec![u16::MAX; self.order];
        let mut representatives = Vec::new();
        for a in 0..self.order as u16 {
            if coset_of[a as usize] != u16::MAX {
                continue;
            }
            let coset = representatives.len() as u16;
            representatives.push(a);
            for &z in &self.center {
                coset_of[self.mul(a, z) as usize] = coset;
            }
        }
        let q = representatives.len();
        let mut table = vec![vec![0u16; q]; q];
        for (a, &ra) in representatives.iter().enumerate() {
            for (b, &rb) in representatives.iter().enumerate() {
                table[a][b] = coset_of[self.mul(ra, rb) as usize];
            }
        }
        let quotient = FiniteGroup::from_table(table)
            .expect("quotient of a valid group by a central subgroup is a group");
        (quotient, coset_of)
    }
}

/// The alternating group on five points, order 60.
pub fn alternating_5() -> FiniteGroup {
    FiniteGroup::from_cycle_notation("(1 2 3 4 5); (3 4 5)").expect("A5 generators are valid")
}

/// `PSL(2, 7)` acting on the 8 points of the projective line over `F_7`
/// (point 8 is infinity), order 168.
pub fn psl_2_7() -> FiniteGroup {
    // z -> z + 1 and z -> -1/z
    FiniteGroup::from_cycle_notation("(1 2 3 4 5 6 7); (1 8)(2 7)(3 4)(5 6)")
        .expect("PSL(2,7) generators are valid")
}

/// `SL(2, 5)` as explicit matrices over `F_5`, order 120, center `{-I, I}`;
/// the stress test for nontrivial centers.
pub fn special_linear_2_5() -> FiniteGroup {
    let p = 5u16;
    let mut elements: Vec<[u16; 4]> = Vec::new();
    let mut index = HashMap::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c) % p == 1 {
                        index.insert([a, b, c, d], elements.len() as u16);
                        elements.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let order = elements.len();
    let mut table = vec![vec![0u16; order]; order];
    for (i, m) in elements.iter().enumerate() {
        for (j, n) in elements.iter().enumerate() {
            let product = [
                (m[0] * n[0] + m[1] * n[2]) % p,
                (m[0] * n[1] + m[1] * n[3]) % p,
                (m[2] * n[0] + m[3] * n[2]) % p,
                (m[2] * n[1] + m[3] * n[3]) % p,
            ];
            table[i][j] = index[&product];
        }
    }
    FiniteGroup::from_table(table).expect("SL(2,5) table is a group")
}
