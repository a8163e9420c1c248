//! Maps of the resolution to itself: chain-map lifts, composition and
//! null-homotopies.

use super::complex::{sparse_sum, Sparse, SparseAcc};
use super::resolution::FreeResolution;
use super::ResolveError;

/// An A-linear map `F_{j+drop} → F_j` lowering internal degree by `shift`,
/// given on generators: `images[j][g]` is the image of generator `g` of
/// level `j + drop`. Defined for `j + drop ≤ max_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMap {
    pub drop: usize,
    pub shift: i32,
    pub images: Vec<Vec<Sparse>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    /// Target level and internal degree where no preimage exists.
    pub level: usize,
    pub degree: i32,
}

impl FMap {
    pub fn zero(res: &FreeResolution, drop: usize, shift: i32) -> FMap {
        let images = (0..levels(res, drop))
            .map(|j| vec![Vec::new(); res.generators(j + drop).len()])
            .collect();
        FMap { drop, shift, images }
    }

    /// Number of target levels on which the map is defined.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, j: usize, g: usize) -> &[(u32, u32)] {
        &self.images[j][g]
    }

    /// Extend A-linearly to a sparse element of level `j + drop`.
    pub fn apply(&self, res: &FreeResolution, j: usize, x: &[(u32, u32)]) -> Sparse {
        let alg = res.algebra();
        let mut acc = SparseAcc::new();
        for &(g, a) in x {
            acc.add_product(alg, a as usize, &self.images[j][g as usize]);
        }
        acc.finish()
    }

    pub fn add(&self, other: &FMap) -> FMap {
        assert_eq!((self.drop, self.shift), (other.drop, other.shift), "adding maps of different bidegree");
        let n = self.len().min(other.len());
        let images = (0..n)
            .map(|j| {
                self.images[j]
                    .iter()
                    .zip(&other.images[j])
                    .map(|(x, y)| sparse_sum(x, y))
                    .collect()
            })
            .collect();
        FMap {
            drop: self.drop,
            shift: self.shift,
            images,
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, res: &FreeResolution, inner: &FMap) -> FMap {
        let drop = self.drop + inner.drop;
        let n = levels(res, drop).min(self.len());
        let images = (0..n)
            .map(|j| {
                inner.images[j + self.drop]
                    .iter()
                    .map(|y| self.apply(res, j, y))
                    .collect()
            })
            .collect();
        FMap {
            drop,
            shift: self.shift + inner.shift,
            images,
        }
    }

    /// Coefficient of `ι` in the level-0 images of generators of level
    /// `drop` and degree `shift`, in generator order: the Ext class of a
    /// chain map.
    pub fn class_vector(&self, res: &FreeResolution) -> Vec<bool> {
        let gens = res.generators_in_degree(self.drop, self.shift);
        gens.iter()
            .map(|&g| {
                self.images
                    .first()
                    .is_some_and(|l| l[g as usize].iter().any(|&(h, a)| h == 0 && a == 0))
            })
            .collect()
    }

    /// `d∘f = f∘d` on every generator where both sides are defined.
    pub fn is_chain_map(&self, res: &FreeResolution) -> bool {
        let c = res.complex();
        (1..self.len()).all(|j| {
            res.generators(j + self.drop)
                .iter()
                .enumerate()
                .all(|(g, gen)| c.apply_d(j, &self.images[j][g]) == self.apply(res, j - 1, &gen.d))
        })
    }

    /// `d∘k + k∘d = q` where `self = k` has drop `q.drop − 1`.
    pub fn is_homotopy_for(&self, res: &FreeResolution, q: &FMap) -> bool {
        let c = res.complex();
        assert_eq!(self.drop + 1, q.drop);
        (0..q.len().min(self.len().saturating_sub(1))).all(|j| {
            res.generators(j + q.drop).iter().enumerate().all(|(g, gen)| {
                let lhs = sparse_sum(
                    &c.apply_d(j + 1, &self.images[j + 1][g]),
                    &self.apply(res, j, &gen.d),
                );
                lhs == q.images[j][g]
            })
        })
    }
}

fn levels(res: &FreeResolution, drop: usize) -> usize {
    (res.max_s() + 1).saturating_sub(drop)
}

/// Lift a cocycle on the generators of level `s0` in degree `t0`
/// (`class[k]` for the `k`-th such generator) to a chain map of drop `s0`.
pub fn lift_chain_map(res: &FreeResolution, s0: usize, t0: i32, class: &[bool]) -> Result<FMap, ResolveError> {
    let gens0 = res.generators_in_degree(s0, t0);
    if gens0.len() != class.len() {
        return Err(ResolveError::Malformed(format!(
            "class has {} coordinates, Ext^({s0},{t0}) has {}",
            class.len(),
            gens0.len()
        )));
    }
    let mut f = FMap::zero(res, s0, t0);
    if f.is_empty() {
        return Ok(f);
    }
    for (&g, &on) in gens0.iter().zip(class) {
        if on {
            f.images[0][g as usize] = vec![(0, 0)];
        }
    }
    for j in 1..f.len() {
        for (g, gen) in res.generators(j + s0).iter().enumerate() {
            let t = gen.degree - t0;
            if t < j as i32 {
                continue;
            }
            let rhs = f.apply(res, j - 1, &gen.d);
            if rhs.is_empty() {
                continue;
            }
            let x = res
                .solver(j, t)?
                .solve(&rhs)
                .ok_or_else(|| ResolveError::Malformed(format!("cocycle does not lift at level {j}, degree {t}")))?;
            f.images[j][g] = x;
        }
    }
    Ok(f)
}

/// Solve `d∘k + k∘d = q` for a chain map `q` of drop ≥ 1, with `k = 0` on
/// the bottom level. Fails exactly when `q` represents a nonzero class.
pub fn null_homotopy(res: &FreeResolution, q: &FMap) -> Result<FMap, Obstruction> {
    assert!(q.drop >= 1, "homotopies are only solved for drop ≥ 1");
    let mut k = FMap::zero(res, q.drop - 1, q.shift);
    for j in 0..q.len() {
        if j + 1 >= k.len() {
            break;
        }
        for (g, gen) in res.generators(j + q.drop).iter().enumerate() {
            let t = gen.degree - q.shift;
            let r = sparse_sum(&q.images[j][g], &k.apply(res, j, &gen.d));
            if r.is_empty() {
                continue;
            }
            let solver = res.solver(j + 1, t).map_err(|_| Obstruction {
                level: j + 1,
                degree: t,
            })?;
            match solver.solve(&r) {
                Some(x) => k.images[j + 1][g] = x,
                None => {
                    return Err(Obstruction {
                        level: j + 1,
                        degree: t,
                    })
                }
            }
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::Profile;
    use crate::resolve::{algebra_for, minimal_resolution};

    #[test]
    fn unit_lifts_to_identity() {
        let r = minimal_resolution(algebra_for(&Profile::a(2), 30), 6, 30).unwrap();
        let id = lift_chain_map(&r, 0, 0, &[true]).unwrap();
        assert!(id.is_chain_map(&r));
        for j in 0..id.len() {
            for g in 0..r.generators(j).len() {
                assert_eq!(id.image(j, g), &[(g as u32, 0)]);
            }
        }
    }

    #[test]
    fn h0_powers() {
        let r = minimal_resolution(algebra_for(&Profile::a(2), 30), 6, 30).unwrap();
        let h0 = lift_chain_map(&r, 1, 1, &[true]).unwrap();
        assert!(h0.is_chain_map(&r));
        let h0sq = h0.compose(&r, &h0);
        assert!(h0sq.is_chain_map(&r));
        assert_eq!(h0sq.class_vector(&r), vec![true]);
        let h1 = lift_chain_map(&r, 1, 2, &[true]).unwrap();
        let h0h1 = h0.compose(&r, &h1);
        assert!(h0h1.class_vector(&r).iter().all(|&b| !b));
        let h1h0 = h1.compose(&r, &h0);
        let k = null_homotopy(&r, &h0h1.add(&h1h0)).unwrap();
        assert!(k.is_homotopy_for(&r, &h0h1.add(&h1h0)));
    }

    #[test]
    fn nonzero_class_is_obstructed() {
        let r = minimal_resolution(algebra_for(&Profile::a(2), 30), 6, 30).unwrap();
        let h0 = lift_chain_map(&r, 1, 1, &[true]).unwrap();
        assert!(null_homotopy(&r, &h0).is_err());
    }
}
