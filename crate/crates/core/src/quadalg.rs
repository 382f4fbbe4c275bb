//! Two-dimensional commutative algebras over a finite field K.
//!
//! V is realised as the K-span of the 2x2 matrices `r = I` and
//! `i = [[0, 1], [-n, t]]`; the element `x r + y i` is the matrix
//! `[[x, y], [-n y, x + t y]]`. Depending on the number of roots of
//! `X^2 - tX + n` in K, V is a quadratic field extension, the dual numbers,
//! or the split algebra K x K.

use crate::gf::{Fe, Field, FieldDescriptor, GfError};
use crate::report::{AxiomReport, Witness};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Algebras are tabulated, so q^2 must fit the 8-bit element index.
pub const MAX_FIELD_ORDER: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("{0} is a zero divisor and has no inverse")]
    NotUnit(AlgElem),
    #[error("algebras are supported for q <= {MAX_FIELD_ORDER}, got q = {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Extension,
    Dual,
    Split,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Extension => "extension",
            Kind::Dual => "dual",
            Kind::Split => "split",
        })
    }
}

/// The element `x r + y i`. The derived order is lexicographic in (x, y).
/// Serialized as the pair `[x, y]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[Fe; 2]", from = "[Fe; 2]")]
pub struct AlgElem {
    pub x: Fe,
    pub y: Fe,
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<AlgElem> for [Fe; 2] {
    fn from(a: AlgElem) -> Self {
        [a.x, a.y]
    }
}

impl From<[Fe; 2]> for AlgElem {
    fn from([x, y]: [Fe; 2]) -> Self {
        AlgElem { x, y }
    }
}

impl AlgElem {
    pub const ZERO: AlgElem = AlgElem { x: Fe::ZERO, y: Fe::ZERO };
    pub const ONE: AlgElem = AlgElem { x: Fe::ONE, y: Fe::ZERO };

    pub fn new(x: Fe, y: Fe) -> Self {
        AlgElem { x, y }
    }

    pub fn is_zero(self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    pub field: FieldDescriptor,
    pub t: Fe,
    pub n: Fe,
    pub kind: Kind,
    pub r: AlgElem,
    pub s: AlgElem,
}

pub struct Algebra {
    field: Arc<Field>,
    t: Fe,
    n: Fe,
    kind: Kind,
    r: AlgElem,
    s: AlgElem,
    q: usize,
    mul: Vec<u8>,
    norm: Vec<Fe>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} algebra over F_{} (t={}, n={})", self.kind, self.q, self.t, self.n)
    }
}

impl Algebra {
    pub fn new(field: Arc<Field>, t: Fe, n: Fe) -> Result<Arc<Algebra>, AlgError> {
        let q = field.order();
        if q > MAX_FIELD_ORDER {
            return Err(AlgError::TooLarge(q));
        }
        field.elem(t.idx() as u64)?;
        field.elem(n.idx() as u64)?;
        let f = &field;
        let roots = f
            .elements()
            .filter(|&a| f.add(f.sub(f.mul(a, a), f.mul(t, a)), n).is_zero())
            .count();
        let kind = match roots {
            0 => Kind::Extension,
            1 => Kind::Dual,
            _ => Kind::Split,
        };
        let direct_mul = |a: AlgElem, b: AlgElem| -> AlgElem {
            let yy = f.mul(a.y, b.y);
            AlgElem {
                x: f.sub(f.mul(a.x, b.x), f.mul(n, yy)),
                y: f.add(f.add(f.mul(a.x, b.y), f.mul(a.y, b.x)), f.mul(t, yy)),
            }
        };
        let elems: Vec<AlgElem> = (0..q * q).map(|i| unpack(q, i)).collect();
        let mut mul = vec![0u8; q * q * q * q];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                mul[i * q * q + j] = pack(q, direct_mul(a, b)) as u8;
            }
        }
        let norm = elems
            .iter()
            .map(|a| f.add(f.add(f.mul(a.x, a.x), f.mul(t, f.mul(a.x, a.y))), f.mul(n, f.mul(a.y, a.y))))
            .collect::<Vec<_>>();
        // zero-divisor lines, each represented by its element with y = 1
        let mut lines: Vec<AlgElem> = f
            .elements()
            .map(|x| AlgElem { x, y: Fe::ONE })
            .filter(|a| norm[pack(q, *a)].is_zero())
            .collect();
        lines.sort();
        let (r, s) = match lines.len() {
            0 => (AlgElem::ZERO, AlgElem::ZERO),
            1 => (lines[0], lines[0]),
            _ => (lines[0], lines[1]),
        };
        Ok(Arc::new(Algebra { field, t, n, kind, r, s, q, mul, norm }))
    }

    /// Canonical parameters: Dual (0,0), Split (1,0), Extension the least
    /// (t,n) in lexicographic order with `X^2 - tX + n` irreducible.
    pub fn canonical_params(field: &Field, kind: Kind) -> (Fe, Fe) {
        match kind {
            Kind::Dual => (Fe::ZERO, Fe::ZERO),
            Kind::Split => (Fe::ONE, Fe::ZERO),
            Kind::Extension => {
                for t in field.elements() {
                    for n in field.elements() {
                        let irreducible = field
                            .elements()
                            .all(|a| !field.add(field.sub(field.mul(a, a), field.mul(t, a)), n).is_zero());
                        if irreducible {
                            return (t, n);
                        }
                    }
                }
                unreachable!("every finite field has an irreducible quadratic")
            }
        }
    }

    pub fn of_kind(field: Arc<Field>, kind: Kind) -> Result<Arc<Algebra>, AlgError> {
        let (t, n) = Algebra::canonical_params(&field, kind);
        Algebra::new(field, t, n)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn t(&self) -> Fe {
        self.t
    }

    pub fn n(&self) -> Fe {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Generator of the first zero-divisor line (zero for a field).
    pub fn r(&self) -> AlgElem {
        self.r
    }

    /// Generator of the second zero-divisor line; equals `r` for dual numbers.
    pub fn s(&self) -> AlgElem {
        self.s
    }

    pub fn discriminant(&self) -> Fe {
        let f = &self.field;
        f.sub(f.mul(self.t, self.t), f.mul(f.from_int(4), self.n))
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        AlgebraDescriptor {
            field: self.field.descriptor(),
            t: self.t,
            n: self.n,
            kind: self.kind,
            r: self.r,
            s: self.s,
        }
    }

    pub fn elem(&self, x: u64, y: u64) -> Result<AlgElem, AlgError> {
        Ok(AlgElem { x: self.field.elem(x)?, y: self.field.elem(y)? })
    }

    /// The basis element `i`.
    pub fn i(&self) -> AlgElem {
        AlgElem { x: Fe::ZERO, y: Fe::ONE }
    }

    /// `k r`, the image of a scalar.
    pub fn scalar(&self, k: Fe) -> AlgElem {
        AlgElem { x: k, y: Fe::ZERO }
    }

    #[inline]
    pub fn index(&self, a: AlgElem) -> usize {
        pack(self.q, a)
    }

    #[inline]
    pub fn from_index(&self, i: usize) -> AlgElem {
        unpack(self.q, i)
    }

    pub fn size(&self) -> usize {
        self.q * self.q
    }

    /// All q^2 elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = AlgElem> + Clone + '_ {
        (0..self.q * self.q).map(move |i| unpack(self.q, i))
    }

    pub fn units(&self) -> Vec<AlgElem> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    /// V_0, the non-units (including zero).
    pub fn zero_divisors(&self) -> Vec<AlgElem> {
        self.elements().filter(|&a| !self.is_unit(a)).collect()
    }

    #[inline]
    pub fn add(&self, a: AlgElem, b: AlgElem) -> AlgElem {
        AlgElem { x: self.field.add(a.x, b.x), y: self.field.add(a.y, b.y) }
    }

    #[inline]
    pub fn sub(&self, a: AlgElem, b: AlgElem) -> AlgElem {
        AlgElem { x: self.field.sub(a.x, b.x), y: self.field.sub(a.y, b.y) }
    }

    #[inline]
    pub fn neg(&self, a: AlgElem) -> AlgElem {
        AlgElem { x: self.field.neg(a.x), y: self.field.neg(a.y) }
    }

    #[inline]
    pub fn mul(&self, a: AlgElem, b: AlgElem) -> AlgElem {
        let qq = self.q * self.q;
        unpack(self.q, self.mul[pack(self.q, a) * qq + pack(self.q, b)] as usize)
    }

    #[inline]
    pub fn scale(&self, k: Fe, a: AlgElem) -> AlgElem {
        AlgElem { x: self.field.mul(k, a.x), y: self.field.mul(k, a.y) }
    }

    /// The adjugate involution `(x, y) -> (x + t y, -y)`.
    #[inline]
    pub fn sigma(&self, a: AlgElem) -> AlgElem {
        let f = &self.field;
        AlgElem { x: f.add(a.x, f.mul(self.t, a.y)), y: f.neg(a.y) }
    }

    /// `x^2 + t x y + n y^2`, the determinant of the representing matrix.
    #[inline]
    pub fn norm(&self, a: AlgElem) -> Fe {
        self.norm[pack(self.q, a)]
    }

    /// `2x + t y`, the trace of the representing matrix.
    pub fn trace(&self, a: AlgElem) -> Fe {
        let f = &self.field;
        f.add(f.add(a.x, a.x), f.mul(self.t, a.y))
    }

    #[inline]
    pub fn is_unit(&self, a: AlgElem) -> bool {
        !self.norm(a).is_zero()
    }

    pub fn inverse(&self, a: AlgElem) -> Result<AlgElem, AlgError> {
        let nm = self.norm(a);
        if nm.is_zero() {
            return Err(AlgError::NotUnit(a));
        }
        Ok(self.scale(self.field.inv_nz(nm), self.sigma(a)))
    }

    /// The 2x2 matrix `[[x, y], [-n y, x + t y]]` representing `a`.
    pub fn rep_matrix(&self, a: AlgElem) -> [[Fe; 2]; 2] {
        let f = &self.field;
        [[a.x, a.y], [f.neg(f.mul(self.n, a.y)), f.add(a.x, f.mul(self.t, a.y))]]
    }

    /// `[[x(rM), y(rM)], [x(iM), y(iM)]]`, which coincides with the
    /// representing matrix of `M`.
    pub fn coord_matrix(&self, m: AlgElem) -> [[Fe; 2]; 2] {
        let top = self.mul(AlgElem::ONE, m);
        let bottom = self.mul(self.i(), m);
        let c = [[top.x, top.y], [bottom.x, bottom.y]];
        debug_assert_eq!(c, self.rep_matrix(m));
        c
    }

    /// The six 2x2 minors of the 2x4 matrix `[M | N]`, columns taken in
    /// lexicographic pairs (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
    pub fn juxtaposition_minors(&self, m: AlgElem, n: AlgElem) -> JuxtapositionMinors {
        let f = &self.field;
        let (a, b) = (self.rep_matrix(m), self.rep_matrix(n));
        let cols = [[a[0][0], a[1][0]], [a[0][1], a[1][1]], [b[0][0], b[1][0]], [b[0][1], b[1][1]]];
        let mut minors = [Fe::ZERO; 6];
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                minors[k] = f.sub(f.mul(cols[i][0], cols[j][1]), f.mul(cols[j][0], cols[i][1]));
                k += 1;
            }
        }
        let prod = self.rep_matrix(self.mul(self.sigma(n), m));
        let expected = [prod[0][0], prod[0][1], prod[1][0], prod[1][1], self.norm(m), self.norm(n)];
        let up_to_sign = |v: &[Fe]| {
            let mut w: Vec<Fe> = v.iter().map(|&e| e.min(f.neg(e))).collect();
            w.sort();
            w
        };
        let matches = up_to_sign(&minors) == up_to_sign(&expected);
        JuxtapositionMinors { minors, expected, matches }
    }

    /// Whether every element is a product of two elements.
    pub fn product_surjectivity(&self) -> bool {
        products_cover(self.size(), |i, j| self.index(self.mul(self.from_index(i), self.from_index(j))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JuxtapositionMinors {
    pub minors: [Fe; 6],
    /// The four entries of `adj(N) M` followed by `det M`, `det N`.
    pub expected: [Fe; 6],
    /// Equality of the two lists as multisets, up to sign.
    pub matches: bool,
}

/// Whether a binary operation on `{0..size}` hits every element.
pub fn products_cover(size: usize, mul: impl Fn(usize, usize) -> usize) -> bool {
    let mut hit = vec![false; size];
    for a in 0..size {
        for b in 0..size {
            hit[mul(a, b)] = true;
        }
    }
    hit.into_iter().all(|h| h)
}

/// Exhaustive structural checks: commutativity, associativity, product
/// surjectivity, sigma an involutive automorphism with trace and norm in K,
/// the zero divisors forming `Kr u Ks`, and the kind agreeing with the
/// number of zero divisors (1, q, 2q-1 for extension, dual, split).
pub fn check_algebra(alg: &Algebra) -> AxiomReport {
    let mut rep = AxiomReport::new("algebra", "quadratic algebra trichotomy, adjugate involution, trace and norm in K");
    let f = &**alg.field();
    let q = alg.q();
    let elems: Vec<AlgElem> = alg.elements().collect();
    for &a in &elems {
        let sa = alg.sigma(a);
        rep.require(alg.sigma(sa) == a, || Witness::new(format!("sigma(sigma({a})) != {a}")));
        rep.require(alg.mul(a, sa) == alg.scalar(alg.norm(a)), || Witness::new(format!("{a} sigma({a}) is not the norm")));
        rep.require(alg.add(a, sa) == alg.scalar(alg.trace(a)), || Witness::new(format!("{a} + sigma({a}) is not the trace")));
        for &b in &elems {
            rep.require(alg.mul(a, b) == alg.mul(b, a), || Witness::new(format!("{a} and {b} do not commute")));
            rep.require(alg.sigma(alg.mul(a, b)) == alg.mul(sa, alg.sigma(b)), || Witness::new(format!("sigma not multiplicative on {a}, {b}")));
            rep.require(alg.sigma(alg.add(a, b)) == alg.add(sa, alg.sigma(b)), || Witness::new(format!("sigma not additive on {a}, {b}")));
            for &c in &elems {
                rep.require(alg.mul(alg.mul(a, b), c) == alg.mul(a, alg.mul(b, c)), || Witness::new(format!("({a} {b}) {c} != {a} ({b} {c})")));
            }
        }
    }
    for k in f.elements() {
        rep.require(alg.sigma(alg.scalar(k)) == alg.scalar(k), || Witness::new(format!("sigma moves the scalar {k}")));
    }
    rep.require(alg.product_surjectivity(), || Witness::new("some element is not a product"));
    let zd = alg.zero_divisors();
    let expected = match alg.kind() {
        Kind::Extension => 1,
        Kind::Dual => q,
        Kind::Split => 2 * q - 1,
    };
    rep.require(zd.len() == expected, || Witness::new(format!("{} zero divisors for a {} algebra, expected {expected}", zd.len(), alg.kind())));
    let mut cover: Vec<AlgElem> = f.elements().flat_map(|k| [alg.scale(k, alg.r()), alg.scale(k, alg.s())]).collect();
    if alg.kind() == Kind::Extension {
        cover = vec![AlgElem::ZERO];
    }
    cover.sort();
    cover.dedup();
    rep.require(cover == zd, || Witness::new("zero divisors differ from Kr u Ks"));
    rep.stat("kind", alg.kind());
    rep.stat("zero_divisors", zd.len());
    rep
}

#[inline]
fn pack(q: usize, a: AlgElem) -> usize {
    a.x.idx() * q + a.y.idx()
}

#[inline]
fn unpack(q: usize, i: usize) -> AlgElem {
    AlgElem { x: Fe((i / q) as u8), y: Fe((i % q) as u8) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(p: u32, e: u32, t: u64, n: u64) -> Arc<Algebra> {
        let f = Field::new(p, e, None).unwrap();
        let (t, n) = (f.elem(t).unwrap(), f.elem(n).unwrap());
        Algebra::new(f, t, n).unwrap()
    }

    fn el(a: &Algebra, x: u64, y: u64) -> AlgElem {
        a.elem(x, y).unwrap()
    }

    #[test]
    fn kinds_over_f2() {
        let ext = alg(2, 1, 1, 1);
        assert_eq!(ext.kind(), Kind::Extension);
        assert_eq!(ext.r(), AlgElem::ZERO);
        let dual = alg(2, 1, 0, 0);
        assert_eq!(dual.kind(), Kind::Dual);
        assert_eq!(dual.r(), el(&dual, 0, 1));
        assert_eq!(dual.r(), dual.s());
        assert!(dual.mul(dual.r(), dual.r()).is_zero());
        let split = alg(2, 1, 1, 0);
        assert_eq!(split.kind(), Kind::Split);
        assert_eq!((split.r(), split.s()), (el(&split, 0, 1), el(&split, 1, 1)));
        assert!(split.mul(split.r(), split.s()).is_zero());
    }

    #[test]
    fn canonical_params() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(Algebra::canonical_params(&f2, Kind::Extension), (Fe(1), Fe(1)));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(Algebra::canonical_params(&f3, Kind::Extension), (Fe(0), Fe(1)));
        assert_eq!(Algebra::canonical_params(&f3, Kind::Split), (Fe(1), Fe(0)));
    }

    #[test]
    fn multiplication_examples() {
        let a = alg(3, 1, 0, 1);
        let i = a.i();
        assert_eq!(a.mul(i, i), el(&a, 2, 0));
        let split = alg(2, 1, 1, 0);
        assert!(split.mul(el(&split, 0, 1), el(&split, 1, 1)).is_zero());
    }

    #[test]
    fn adjugate_examples() {
        let a = alg(3, 1, 0, 1);
        assert_eq!(a.sigma(AlgElem::ONE), AlgElem::ONE);
        assert_eq!(a.sigma(el(&a, 1, 2)), el(&a, 1, 1));
        let d = alg(2, 1, 0, 0);
        assert_eq!(d.sigma(el(&d, 1, 1)), el(&d, 1, 1));
    }

    #[test]
    fn norm_trace_units() {
        let a = alg(3, 1, 2, 1);
        assert_eq!(a.norm(a.i()), a.n());
        assert_eq!(a.trace(a.i()), a.t());
        assert_eq!(alg(2, 1, 1, 1).units().len(), 3);
        let split = alg(2, 1, 1, 0);
        assert_eq!(split.units(), vec![AlgElem::ONE]);
        assert!(matches!(split.inverse(split.r()), Err(AlgError::NotUnit(_))));
    }

    #[test]
    fn coord_matrix_examples() {
        let a = alg(3, 1, 0, 1);
        assert_eq!(a.coord_matrix(AlgElem::ONE), [[Fe(1), Fe(0)], [Fe(0), Fe(1)]]);
        assert_eq!(a.coord_matrix(a.i()), [[Fe(0), Fe(1)], [Fe(2), Fe(0)]]);
    }

    #[test]
    fn minors_examples() {
        let a = alg(2, 1, 0, 0);
        let j = a.juxtaposition_minors(AlgElem::ONE, AlgElem::ONE);
        assert!(j.matches);
        let f3 = alg(3, 1, 0, 0);
        let j = f3.juxtaposition_minors(AlgElem::ONE, AlgElem::ONE);
        assert_eq!(j.minors, [Fe(1), Fe(0), Fe(1), Fe(2), Fe(0), Fe(1)]);
        assert!(j.matches);
        let j = f3.juxtaposition_minors(AlgElem::ONE, AlgElem::ZERO);
        assert_eq!(j.minors, [Fe(1), Fe(0), Fe(0), Fe(0), Fe(0), Fe(0)]);
        assert!(j.matches);
        for m in a.elements() {
            for n in a.elements() {
                assert!(a.juxtaposition_minors(m, n).matches);
            }
        }
    }

    #[test]
    fn too_large_field_is_rejected() {
        let f = Field::prime(17).unwrap();
        assert_eq!(Algebra::new(f, Fe::ZERO, Fe::ZERO).unwrap_err(), AlgError::TooLarge(17));
    }

    /// 2x2 matrices with zero second row, `(a, b)(c, d) = (ac, ad)`.
    fn zero_second_row(f: &Field) -> impl Fn(usize, usize) -> usize + '_ {
        let q = f.order();
        move |i, j| {
            let a = f.elem((i / q) as u64).unwrap();
            let (c, d) = (f.elem((j / q) as u64).unwrap(), f.elem((j % q) as u64).unwrap());
            f.mul(a, c).idx() * q + f.mul(a, d).idx()
        }
    }

    #[test]
    fn surjectivity_controls() {
        for q in [2, 3] {
            let f = Field::prime(q).unwrap();
            let size = (q * q) as usize;
            // surjective (the left identity (1,0) reproduces everything) but
            // not commutative, which is what disqualifies it
            let zsr = zero_second_row(&f);
            assert!(products_cover(size, &zsr));
            assert!((0..size).any(|i| (0..size).any(|j| zsr(i, j) != zsr(j, i))));
            assert!(!products_cover(size, |_, _| 0));
            for kind in [Kind::Extension, Kind::Dual, Kind::Split] {
                assert!(Algebra::of_kind(f.clone(), kind).unwrap().product_surjectivity());
            }
        }
    }

    #[test]
    fn check_algebra_holds_for_every_parameter_pair() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = Field::new(p, e, None).unwrap();
            for t in f.elements() {
                for n in f.elements() {
                    let a = Algebra::new(f.clone(), t, n).unwrap();
                    let r = check_algebra(&a);
                    assert!(r.holds, "q = {}, t = {t}, n = {n}: {:?}", f.order(), r.witnesses.first());
                }
            }
        }
    }
}
