//! Double description: extreme rays of `{t : C t >= 0}` for a constraint
//! matrix `C` of full column rank.
//!
//! Rays are kept as primitive integer vectors together with the set of
//! processed constraints they saturate. Two rays of opposite sign are
//! combined only when they are adjacent, tested combinatorially: their
//! common zero set must have at least `r - 2` members and must not be
//! contained in the zero set of any third ray.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{dot_int, inverse, primitive, primitive_int, rank, to_rational};

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<BigInt>,
    zeros: Bits,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

/// Counters from one run, for diagnostics and benches.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DdStats {
    pub iterations: usize,
    pub max_rays: usize,
    pub adjacency_tests: u64,
}

/// Extreme rays of `{t in Q^r : c . t >= 0 for every row c}`.
///
/// `constraints` must have rank `r`. Rows are inserted in the given order
/// after an initial simplicial cone built from the first independent rows.
pub fn extreme_rays(constraints: &[Vec<BigInt>], r: usize) -> (Vec<Vec<BigInt>>, DdStats) {
    let mut stats = DdStats::default();
    if r == 0 {
        return (Vec::new(), stats);
    }
    let m = constraints.len();
    let rational: Vec<_> = constraints.iter().map(|c| to_rational(c)).collect();
    let mut initial: Vec<usize> = Vec::with_capacity(r);
    for i in 0..m {
        let mut trial: Vec<_> = initial.iter().map(|&k| rational[k].clone()).collect();
        trial.push(rational[i].clone());
        if rank(&trial) == trial.len() {
            initial.push(i);
            if initial.len() == r {
                break;
            }
        }
    }
    assert_eq!(initial.len(), r, "constraint matrix must have full column rank");

    let c0: Vec<_> = initial.iter().map(|&k| rational[k].clone()).collect();
    let inv = inverse(&c0).expect("initial rows are independent");
    let mut rays: Vec<Ray> = (0..r)
        .map(|j| {
            let col: Vec<_> = inv.iter().map(|row| row[j].clone()).collect();
            let mut zeros = Bits::new(m);
            for (k, &row) in initial.iter().enumerate() {
                if k != j {
                    zeros.set(row);
                }
            }
            Ray { v: primitive(&col), zeros }
        })
        .collect();

    let need = r.saturating_sub(2) as u32;
    for (i, c) in constraints.iter().enumerate() {
        if initial.contains(&i) {
            continue;
        }
        stats.iterations += 1;
        let values: Vec<BigInt> = rays.iter().map(|ray| dot_int(c, &ray.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        if neg.is_empty() {
            for (ray, val) in rays.iter_mut().zip(&values) {
                if val.is_zero() {
                    ray.zeros.set(i);
                }
            }
            continue;
        }
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if common.count() < need {
                    continue;
                }
                stats.adjacency_tests += 1;
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(q, ray)| q != p && q != n && ray.zeros.contains(&common));
                if blocked {
                    continue;
                }
                let sp = &values[p];
                let sn = -&values[n];
                let v: Vec<BigInt> = rays[p]
                    .v
                    .iter()
                    .zip(&rays[n].v)
                    .map(|(a, b)| &sn * a + sp * b)
                    .collect();
                let mut zeros = common;
                zeros.set(i);
                created.push(Ray { v: primitive_int(v), zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (mut ray, val) in rays.into_iter().zip(&values) {
            if val.is_negative() {
                continue;
            }
            if val.is_zero() {
                ray.zeros.set(i);
            }
            next.push(ray);
        }
        next.extend(created);
        rays = next;
        stats.max_rays = stats.max_rays.max(rays.len());
    }
    stats.max_rays = stats.max_rays.max(rays.len());
    (rays.into_iter().map(|ray| ray.v).collect(), stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn sorted(mut v: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
        v.sort();
        v
    }

    #[test]
    fn orthant() {
        let (rays, _) = extreme_rays(&ints(&[&[1, 0], &[0, 1]]), 2);
        assert_eq!(sorted(rays), ints(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn square_pyramid() {
        // Cone over a square: four facets, four extreme rays.
        let c = ints(&[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1]]);
        let (rays, _) = extreme_rays(&c, 3);
        assert_eq!(
            sorted(rays),
            ints(&[&[-1, -1, 1], &[-1, 1, 1], &[1, -1, 1], &[1, 1, 1]])
        );
    }

    #[test]
    fn degenerate_cone() {
        // t1 >= 0 and -t1 >= 0 leaves the ray (0, 1).
        let (rays, _) = extreme_rays(&ints(&[&[1, 0], &[-1, 0], &[0, 1]]), 2);
        assert_eq!(rays, ints(&[&[0, 1]]));
        let (rays, _) = extreme_rays(&ints(&[&[1], &[-1]]), 1);
        assert!(rays.is_empty());
    }
}
