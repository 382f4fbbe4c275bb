//! Hermitian 3x3 matrices over V and the rank 1 condition.

use super::VsetError;
use crate::gf::Fe;
use crate::quadalg::{AlgElem, Algebra};
use crate::ringplane::{is_admissible, Triple};
use serde::Serialize;

/// `[[k1, R3, R2'], [R3', k2, R1], [R2, R1', k3]]` with `'` the adjugate.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HermMat3 {
    pub k: [Fe; 3],
    /// `[R1, R2, R3]`.
    pub r: [AlgElem; 3],
}

impl HermMat3 {
    /// `sigma(v)^T v` for `v = (M, N, L)`, whose entries are
    /// `sigma(v_i) v_j`. Its coordinates are exactly [`herm_coords`].
    pub fn from_triple(alg: &Algebra, t: &Triple) -> Self {
        let e = |i: usize, j: usize| alg.mul(alg.sigma(t[i]), t[j]);
        HermMat3 { k: [0, 1, 2].map(|i| alg.norm(t[i])), r: [e(1, 2), e(2, 0), e(0, 1)] }
    }

    pub fn entries(&self, alg: &Algebra) -> [[AlgElem; 3]; 3] {
        let [r1, r2, r3] = self.r;
        let s = |a| alg.sigma(a);
        let k = self.k.map(|k| alg.scalar(k));
        [[k[0], r3, s(r2)], [s(r3), k[1], r1], [r2, s(r1), k[2]]]
    }

    /// `(k1, k2, k3, x(R3), y(R3), x(R1), y(R1), x(R2), y(R2))`.
    pub fn coords(&self) -> [Fe; 9] {
        let [r1, r2, r3] = self.r;
        [self.k[0], self.k[1], self.k[2], r3.x, r3.y, r1.x, r1.y, r2.x, r2.y]
    }

    pub fn from_coords(c: [Fe; 9]) -> Self {
        HermMat3 { k: [c[0], c[1], c[2]], r: [AlgElem::new(c[5], c[6]), AlgElem::new(c[7], c[8]), AlgElem::new(c[3], c[4])] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }
}

/// `det M, det N, det L, x(M'N), y(M'N), x(N'L), y(N'L), x(L'M), y(L'M)`.
pub fn herm_coords(alg: &Algebra, t: &Triple) -> Result<[Fe; 9], VsetError> {
    if !is_admissible(alg, t) {
        return Err(VsetError::Inadmissible);
    }
    let [m, n, l] = *t;
    let p = |a: AlgElem, b: AlgElem| alg.mul(alg.sigma(a), b);
    let (mn, nl, lm) = (p(m, n), p(n, l), p(l, m));
    Ok([alg.norm(m), alg.norm(n), alg.norm(l), mn.x, mn.y, nl.x, nl.y, lm.x, lm.y])
}

/// No nonzero `c` with `a c = b c = 0`.
fn coprime(alg: &Algebra, a: AlgElem, b: AlgElem) -> bool {
    alg.elements().all(|c| c.is_zero() || !(alg.mul(a, c).is_zero() && alg.mul(b, c).is_zero()))
}

/// Rank 1 in the sense of the ring plane: a nonzero matrix in which every
/// two rows admit `a R_i + b R_j = 0` with `a, b` having no common nonzero
/// annihilator. Checked by brute force over V^2.
pub fn is_rank1_herm(alg: &Algebra, h: &HermMat3) -> bool {
    if h.is_zero() {
        return false;
    }
    let rows = h.entries(alg);
    let certs: Vec<(AlgElem, AlgElem)> = alg
        .elements()
        .flat_map(|a| alg.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| coprime(alg, a, b))
        .collect();
    [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| {
        certs.iter().any(|&(a, b)| (0..3).all(|c| alg.add(alg.mul(a, rows[i][c]), alg.mul(b, rows[j][c])).is_zero()))
    })
}

/// Recovers a triple whose Hermitian matrix is a multiple of `h`.
///
/// With a nonzero diagonal entry the corresponding row determines the
/// triple. With zero diagonal, V must be split and a nonzero `R` pairs two
/// entries from opposite zero-divisor lines.
pub fn rank1_roundtrip(alg: &Algebra, h: &HermMat3) -> Result<Triple, VsetError> {
    if !is_rank1_herm(alg, h) {
        return Err(VsetError::NotRank1);
    }
    let s = |a| alg.sigma(a);
    let [r1, r2, r3] = h.r;
    let k = h.k.map(|k| alg.scalar(k));
    // row i of sigma(v)^T v is sigma(v_i) v, a unit multiple of v when k_i != 0
    let t = if !h.k[0].is_zero() {
        [k[0], r3, s(r2)]
    } else if !h.k[1].is_zero() {
        [s(r3), k[1], r1]
    } else if !h.k[2].is_zero() {
        [r2, s(r1), k[2]]
    } else {
        // rotate so the nonzero entry plays the role of R3 = sigma(M) N
        let rs = [r3, r1, r2];
        let k = rs.iter().position(|r| !r.is_zero()).ok_or(VsetError::NotRank1)?;
        let (a, b, c) = (rs[k], rs[(k + 1) % 3], rs[(k + 2) % 3]);
        let rot = [s(a), a, if b.is_zero() { s(c) } else { b }];
        let mut t = [AlgElem::ZERO; 3];
        for i in 0..3 {
            t[(i + k) % 3] = rot[i];
        }
        t
    };
    let f = alg.field();
    let got = herm_coords(alg, &t).map_err(|_| VsetError::NotRank1)?;
    let want = h.coords();
    let proportional = crate::projgeom::normalize(f, got.to_vec()) == crate::projgeom::normalize(f, want.to_vec());
    if !proportional {
        return Err(VsetError::Invariant(format!("roundtrip of {:?} produced a different matrix", want)));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::projgeom::normalize;
    use crate::quadalg::Kind;
    use std::collections::HashSet;

    fn alg(p: u32, t: u64, n: u64) -> std::sync::Arc<Algebra> {
        let f = Field::prime(p).unwrap();
        Algebra::new(f.clone(), f.elem(t).unwrap(), f.elem(n).unwrap()).unwrap()
    }

    #[test]
    fn coords_examples() {
        let a = alg(3, 0, 1);
        let (o, z) = (AlgElem::ONE, AlgElem::ZERO);
        let e = |v: &[u64]| v.iter().map(|&c| Fe(c as u8)).collect::<Vec<_>>();
        assert_eq!(herm_coords(&a, &[o, z, z]).unwrap().to_vec(), e(&[1, 0, 0, 0, 0, 0, 0, 0, 0]));
        assert_eq!(herm_coords(&a, &[o, a.i(), z]).unwrap().to_vec(), e(&[1, 1, 0, 0, 1, 0, 0, 0, 0]));
        assert_eq!(herm_coords(&a, &[z, z, z]), Err(VsetError::Inadmissible));
    }

    #[test]
    fn seed_triples_are_independent() {
        for (p, t, n) in [(2, 0, 0), (2, 1, 0), (2, 1, 1), (3, 0, 1), (3, 0, 0), (3, 1, 0)] {
            let a = alg(p, t, n);
            let (o, z, i) = (AlgElem::ONE, AlgElem::ZERO, a.i());
            let seeds = [[o, z, z], [z, o, z], [z, z, o], [z, o, o], [o, z, o], [o, o, z], [z, o, i], [i, z, o], [o, i, z]];
            let rows = seeds.iter().map(|s| herm_coords(&a, s).unwrap().to_vec()).collect();
            assert_eq!(crate::projgeom::linalg::rank(a.field(), rows), 9);
        }
    }

    #[test]
    fn matrix_layout_is_hermitian() {
        let a = alg(3, 1, 0);
        let t = [a.elem(1, 2).unwrap(), a.elem(0, 1).unwrap(), a.elem(2, 2).unwrap()];
        let h = HermMat3::from_triple(&a, &t);
        let e = h.entries(&a);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(e[j][i], a.sigma(e[i][j]));
                assert_eq!(e[i][j], a.mul(a.sigma(t[i]), t[j]));
            }
        }
        assert_eq!(h.coords(), herm_coords(&a, &t).unwrap());
        assert_eq!(HermMat3::from_coords(h.coords()), h);
    }

    #[test]
    fn rank1_negative_examples() {
        let a = alg(2, 0, 0);
        let z = Fe::ZERO;
        assert!(!is_rank1_herm(&a, &HermMat3::from_coords([z; 9])));
        let diag = HermMat3::from_coords([Fe::ONE, Fe::ONE, z, z, z, z, z, z, z]);
        assert!(!is_rank1_herm(&a, &diag));
        assert_eq!(rank1_roundtrip(&a, &diag), Err(VsetError::NotRank1));
    }

    /// S1 = S2: the rank 1 Hermitian matrices are exactly the multiples of
    /// the matrices of admissible triples.
    #[test]
    fn rank1_sets_coincide_at_q2() {
        for kind in [Kind::Dual, Kind::Split, Kind::Extension] {
            let f = Field::prime(2).unwrap();
            let a = Algebra::of_kind(f.clone(), kind).unwrap();
            let size = a.size();
            let mut s2 = HashSet::new();
            for c in 0..size * size * size {
                let t = [a.from_index(c / (size * size)), a.from_index(c / size % size), a.from_index(c % size)];
                if let Ok(h) = herm_coords(&a, &t) {
                    s2.insert(normalize(&f, h.to_vec()).unwrap());
                }
            }
            let mut s1 = HashSet::new();
            for code in 1..1u32 << 9 {
                let c: [Fe; 9] = std::array::from_fn(|i| Fe((code >> i & 1) as u8));
                let h = HermMat3::from_coords(c);
                if is_rank1_herm(&a, &h) {
                    let t = rank1_roundtrip(&a, &h).unwrap();
                    assert!(is_admissible(&a, &t));
                    s1.insert(normalize(&f, c.to_vec()).unwrap());
                }
            }
            assert_eq!(s1, s2, "{kind}");
        }
    }

    #[test]
    fn split_zero_diagonal_roundtrip() {
        let a = Algebra::of_kind(Field::prime(3).unwrap(), Kind::Split).unwrap();
        let r = a.r();
        let t = [r, a.sigma(r), a.scale(Fe(2), r)];
        let h = HermMat3::from_triple(&a, &t);
        assert_eq!(h.k, [Fe::ZERO; 3]);
        let back = rank1_roundtrip(&a, &h).unwrap();
        assert_eq!(normalize(a.field(), herm_coords(&a, &back).unwrap().to_vec()), normalize(a.field(), h.coords().to_vec()));
    }
}
