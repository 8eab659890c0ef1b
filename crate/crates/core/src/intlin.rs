//! Exact integer linear algebra: Hermite and Smith normal forms, sublattice
//! membership, and the structure of `Z^n / L` for a lattice `L`.
//!
//! Everything is over arbitrary-precision integers. Lattices are row spans.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length. `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(cols: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Product that skips zero entries of the left factor.
    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: rhs.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + j];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign
            * if n == 0 {
                BigInt::one()
            } else {
                a[(n - 1, n - 1)].clone()
            })
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// `row[dst] += c * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for k in 0..self.cols {
            let s = &self.data[src * self.cols + k];
            if !s.is_zero() {
                let v = c * s;
                self.data[dst * self.cols + k] += v;
            }
        }
    }

    /// `col[dst] += c * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src];
            if !s.is_zero() {
                let v = c * s;
                self.data[r * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = &mut self.data[i * self.cols + k];
            *v = -std::mem::take(v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = &mut self.data[r * self.cols + j];
            *v = -std::mem::take(v);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` in Smith form.
/// The inverses are carried along so that unimodularity is checkable by
/// multiplication instead of determinants.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Checks every postcondition against the input matrix.
    pub fn verify(&self, m: &IntMatrix) -> std::result::Result<(), String> {
        let (r, c) = (m.rows, m.cols);
        if self.u.mul(&self.u_inv).map_err(|e| e.to_string())? != IntMatrix::identity(r) {
            return Err("U * U^-1 != I".into());
        }
        if self.v.mul(&self.v_inv).map_err(|e| e.to_string())? != IntMatrix::identity(c) {
            return Err("V * V^-1 != I".into());
        }
        let umv = self
            .u
            .mul(m)
            .and_then(|x| x.mul(&self.v))
            .map_err(|e| e.to_string())?;
        if umv != self.d {
            return Err("U * M * V != D".into());
        }
        for i in 0..r {
            for j in 0..c {
                if i != j && !self.d[(i, j)].is_zero() {
                    return Err(format!("D has off-diagonal entry at ({i}, {j})"));
                }
            }
        }
        let diag: Vec<BigInt> = (0..r.min(c)).map(|i| self.d[(i, i)].clone()).collect();
        for w in diag.windows(2) {
            if w[0].is_negative() || w[1].is_negative() {
                return Err("negative diagonal entry".into());
            }
            let divides = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            };
            if !divides {
                return Err(format!("{} does not divide {}", w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// Smith normal form by elimination with minimal-absolute-value pivots.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    // Row and column operations applied to `a` and mirrored on the transforms.
    macro_rules! row_add {
        ($dst:expr, $src:expr, $q:expr) => {{
            let q: &BigInt = $q;
            a.add_row($dst, $src, q);
            u.add_row($dst, $src, q);
            u_inv.add_col($src, $dst, &-q);
        }};
    }
    macro_rules! col_add {
        ($dst:expr, $src:expr, $q:expr) => {{
            let q: &BigInt = $q;
            a.add_col($dst, $src, q);
            v.add_col($dst, $src, q);
            v_inv.add_row($src, $dst, &-q);
        }};
    }
    macro_rules! row_swap {
        ($i:expr, $j:expr) => {{
            a.swap_rows($i, $j);
            u.swap_rows($i, $j);
            u_inv.swap_cols($i, $j);
        }};
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {{
            a.swap_cols($i, $j);
            v.swap_cols($i, $j);
            v_inv.swap_rows($i, $j);
        }};
    }

    let mut t = 0;
    while t < r.min(c) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = &a[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_swap!(t, pi);
        col_swap!(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                row_add!(i, t, &-q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                col_add!(j, t, &-q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                let mut best = (t, t);
                for i in t + 1..r {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                row_swap!(t, best.0);
                col_swap!(t, best.1);
                continue;
            }
            if a[(t, t)].abs().is_one() {
                break;
            }
            let pivot = a[(t, t)].clone();
            let offender =
                (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => row_add!(t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }

    let snf = SmithForm {
        u,
        u_inv,
        d: a,
        v,
        v_inv,
    };
    #[cfg(debug_assertions)]
    if r * c <= 1 << 14 {
        if let Err(e) = snf.verify(m) {
            panic!("Smith form postcondition failed: {e}");
        }
    }
    snf
}

/// A sublattice of `Z^n`, kept as an echelon basis indexed by pivot column.
///
/// Vectors are added one at a time; each insertion reduces the new vector
/// against the pivots and merges at the first column where the pivot does
/// not divide it (a 2x2 unimodular step). [`Lattice::basis`] returns the
/// reduced Hermite normal form, which is canonical.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    by_pivot: Vec<Option<Vec<BigInt>>>,
    rank: usize,
    max_bits: u64,
}

/// Entry size that triggers reduction of the echelon basis.
const REDUCE_BITS: u64 = 96;

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            by_pivot: vec![None; dim],
            rank: 0,
            max_bits: 0,
        }
    }

    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Result<Self> {
        let mut l = Self::new(dim);
        for g in gens {
            l.insert(g.clone())?;
        }
        Ok(l)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds a generator. Returns whether the lattice grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> Result<bool> {
        self.check_len(v.len())?;
        let mut grew = false;
        for j in 0..self.dim {
            if v[j].is_zero() {
                continue;
            }
            let Some(row) = self.by_pivot[j].as_mut() else {
                if v[j].is_negative() {
                    v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                }
                self.note_bits(&v);
                self.by_pivot[j] = Some(v);
                self.rank += 1;
                self.maybe_reduce();
                return Ok(true);
            };
            let (q, rem) = v[j].div_mod_floor(&row[j]);
            if rem.is_zero() {
                axpy(&mut v[j..], &-q, &row[j..]);
                continue;
            }
            // s*a + t*b = g; [row; v] <- [s t; -b/g a/g] [row; v]
            let a = row[j].clone();
            let b = v[j].clone();
            let eg = a.extended_gcd(&b);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (ag, bg) = (&a / &g, &b / &g);
            for k in j..self.dim {
                let (x, y) = (&row[k], &v[k]);
                let new_row = &s * x + &t * y;
                let new_v = &ag * y - &bg * x;
                row[k] = new_row;
                v[k] = new_v;
            }
            if row[j].is_negative() {
                row.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            let bits = row.iter().map(|x| x.bits()).max().unwrap_or(0);
            self.max_bits = self.max_bits.max(bits);
            grew = true;
        }
        if grew {
            self.maybe_reduce();
        }
        Ok(grew)
    }

    fn note_bits(&mut self, v: &[BigInt]) {
        let bits = v.iter().map(|x| x.bits()).max().unwrap_or(0);
        self.max_bits = self.max_bits.max(bits);
    }

    fn maybe_reduce(&mut self) {
        if self.max_bits > REDUCE_BITS {
            self.reduce();
        }
    }

    /// Reduces every entry above a pivot into `[0, pivot)`.
    fn reduce(&mut self) {
        for j in 0..self.dim {
            let Some(pivot_row) = self.by_pivot[j].take() else {
                continue;
            };
            for i in 0..j {
                if let Some(row) = self.by_pivot[i].as_mut() {
                    if row[j].is_zero() {
                        continue;
                    }
                    let q = row[j].div_floor(&pivot_row[j]);
                    if !q.is_zero() {
                        axpy(&mut row[j..], &-q, &pivot_row[j..]);
                    }
                }
            }
            self.by_pivot[j] = Some(pivot_row);
        }
        self.max_bits = self
            .by_pivot
            .iter()
            .flatten()
            .flat_map(|r| r.iter().map(|x| x.bits()))
            .max()
            .unwrap_or(0);
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        self.check_len(v.len())?;
        let mut v = v.to_vec();
        for j in 0..self.dim {
            if v[j].is_zero() {
                continue;
            }
            let Some(row) = self.by_pivot[j].as_ref() else {
                return Ok(false);
            };
            let (q, rem) = v[j].div_mod_floor(&row[j]);
            if !rem.is_zero() {
                return Ok(false);
            }
            axpy(&mut v[j..], &-q, &row[j..]);
        }
        Ok(true)
    }

    /// Whether every basis vector of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool> {
        for row in other.by_pivot.iter().flatten() {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Reduced row Hermite normal form: positive pivots, entries above each
    /// pivot in `[0, pivot)`, zero rows dropped.
    pub fn basis(&self) -> IntMatrix {
        let mut l = self.clone();
        l.reduce();
        let rows: Vec<Vec<BigInt>> = l.by_pivot.into_iter().flatten().collect();
        IntMatrix::from_rows(self.dim, &rows).expect("rows have lattice dimension")
    }

    /// Pivot columns of the echelon basis, in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim)
            .filter(|&j| self.by_pivot[j].is_some())
            .collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: len,
            })
        }
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.basis() == other.basis()
    }
}

impl Eq for Lattice {}

/// `dst += c * src`
fn axpy(dst: &mut [BigInt], c: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += c * s;
        }
    }
}

/// Reduced Hermite normal form of the row span of `m`.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut l = Lattice::new(m.cols);
    for i in 0..m.rows {
        l.insert(m.row(i).to_vec()).expect("row length matches");
    }
    l.basis()
}

/// Abelian group structure of `Z^n / L`, with the p-local facts needed for
/// torsion verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientStructure {
    pub ambient_rank: usize,
    pub free_rank: usize,
    /// Invariant factors `d_1 | d_2 | ...`, all at least 2.
    pub elementary_divisors: Vec<BigInt>,
    pub prime: u64,
    pub p_torsion_present: bool,
    /// Whether `p` kills the whole quotient.
    pub p_annihilates: bool,
}

impl QuotientStructure {
    pub fn from_lattice(lattice: &Lattice, prime: u64) -> Self {
        let snf = smith_normal_form(&lattice.basis());
        let factors = snf.invariant_factors();
        let elementary_divisors: Vec<BigInt> =
            factors.into_iter().filter(|d| !d.is_one()).collect();
        let p = BigInt::from(prime);
        let free_rank = lattice.dim - lattice.rank();
        Self {
            ambient_rank: lattice.dim,
            free_rank,
            p_torsion_present: elementary_divisors.iter().any(|d| d.is_multiple_of(&p)),
            p_annihilates: free_rank == 0
                && elementary_divisors.iter().all(|d| p.is_multiple_of(d)),
            elementary_divisors,
            prime,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.elementary_divisors.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.elementary_divisors.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.elementary_divisors.iter().product()
    }

    /// Whether some invariant factor has a prime divisor other than `p`.
    pub fn prime_to_p_torsion_present(&self) -> bool {
        let p = BigInt::from(self.prime);
        self.elementary_divisors.iter().any(|d| {
            let mut d = d.clone();
            while d.is_multiple_of(&p) {
                d /= &p;
            }
            !d.is_one()
        })
    }
}

/// Structure of `Z^n / span(generators)`.
pub fn quotient_structure(
    ambient_rank: usize,
    generators: &[Vec<BigInt>],
    prime: u64,
) -> Result<QuotientStructure> {
    let lattice = Lattice::from_generators(ambient_rank, generators)?;
    Ok(QuotientStructure::from_lattice(&lattice, prime))
}

/// Whether `v` lies in the integer span of `generators`.
pub fn lattice_contains(
    ambient_rank: usize,
    generators: &[Vec<BigInt>],
    v: &[BigInt],
) -> Result<bool> {
    Lattice::from_generators(ambient_rank, generators)?.contains(v)
}
