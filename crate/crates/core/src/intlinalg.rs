//! Exact integer linear algebra: gcds, Smith normal form, cokernels and a
//! brute-force minor-gcd oracle.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest matrix dimension `minor_gcd` will enumerate minors for.
pub const MINOR_GCD_LIMIT: usize = 10;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_rows<T: Copy + Into<BigInt>>(rows: &[&[T]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows.iter().flat_map(|row| row.iter().map(|&x| x.into())).collect();
        IntMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(bareiss(self.rows, self.entries.clone()))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_ok_and(|d| d.abs().is_one())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * f;
            if !v.is_zero() {
                self.entries[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * f;
            if !v.is_zero() {
                self.entries[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[r * self.cols + j];
            *e = -std::mem::take(e);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row = (0..self.cols).map(|j| self.get(i, j).to_string()).join(", ");
            write!(f, "{}[{row}]", if i == 0 { "" } else { ", " })?;
        }
        write!(f, "]")
    }
}

fn bareiss(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
        }
        prev = a[k * n + k].clone();
    }
    sign * &a[n * n - 1]
}

/// Finitely generated abelian group `Z^free_rank + Z/d1 + ... + Z/dl` with
/// `1 < d1 | d2 | ... | dl`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_cyclic_factors(0, [n.into()])
    }

    /// Direct sum of `Z^free_rank` and cyclic groups `Z/n` for each `n`.
    /// A factor `0` counts as `Z`, factors `±1` vanish; the result is put
    /// into invariant-factor form.
    pub fn from_cyclic_factors(free_rank: usize, factors: impl IntoIterator<Item = BigInt>) -> Self {
        let mut rank = free_rank;
        let mut ds: Vec<BigInt> = Vec::new();
        for f in factors {
            let f = f.abs();
            if f.is_zero() {
                rank += 1;
            } else if !f.is_one() {
                ds.push(f);
            }
        }
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                let g = ds[i].gcd(&ds[j]);
                let l = ds[i].lcm(&ds[j]);
                ds[i] = g;
                ds[j] = l;
            }
        }
        ds.retain(|d| !d.is_one());
        AbelianGroup {
            free_rank: rank,
            torsion: ds,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        Self::from_cyclic_factors(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// Short label such as `Z3`, `Z2+Z4` or `Z^2+Z5`; `1` for the trivial group.
    pub fn compact(&self) -> String {
        if self.is_trivial() {
            return "1".into();
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z{d}")));
        parts.join("+")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({self})")
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Parses the `Display` form; summands may repeat and need not be canonical.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s == "1" {
            return Ok(Self::trivial());
        }
        let bad = || Error::Parse(format!("invalid group `{s}`"));
        let mut rank = 0usize;
        let mut factors = Vec::new();
        for part in s.split('+').map(str::trim) {
            if part == "Z" {
                rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                rank += r.trim().parse::<usize>().map_err(|_| bad())?;
            } else if let Some(d) = part.strip_prefix("Z/").or_else(|| part.strip_prefix('Z')) {
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if !d.is_positive() {
                    return Err(bad());
                }
                factors.push(d);
            } else if part == "0" {
            } else {
                return Err(bad());
            }
        }
        Ok(Self::from_cyclic_factors(rank, factors))
    }
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    free_rank: usize,
    #[serde(with = "crate::bigjson::vec")]
    torsion: Vec<BigInt>,
    #[serde(default, skip_deserializing)]
    text: String,
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr {
            free_rank: self.free_rank,
            torsion: self.torsion.clone(),
            text: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GroupRepr::deserialize(d)?;
        if r.torsion.iter().any(|t| !t.is_positive()) {
            return Err(serde::de::Error::custom("torsion coefficients must be positive"));
        }
        Ok(Self::from_cyclic_factors(r.free_rank, r.torsion))
    }
}

/// gcd of the absolute values; 0 for an empty or all-zero list.
pub fn gcd_list<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Smith normal form `left * m * right = diag(d1, ..., dk)` with
/// `k = min(rows, cols)`, `d_i >= 0` and `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (diagonal, t) = snf_impl(m, true);
    let (left, right) = t.expect("transforms were requested");
    SmithForm { diagonal, left, right }
}

/// Diagonal of the Smith normal form without accumulating transforms.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    snf_impl(m, false).0
}

fn snf_impl(m: &IntMatrix, track: bool) -> (Vec<BigInt>, Option<(IntMatrix, IntMatrix)>) {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut tr = track.then(|| (IntMatrix::identity(r), IntMatrix::identity(c)));
    let n = r.min(c);

    'outer: for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = a.get(i, j);
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.magnitude() < a.get(bi, bj).magnitude()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if let Some((l, rt)) = tr.as_mut() {
                l.swap_rows(t, pi);
                rt.swap_cols(t, pj);
            }

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(&pivot);
                a.add_row(i, t, &q);
                if let Some((l, _)) = tr.as_mut() {
                    l.add_row(i, t, &q);
                }
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(&pivot);
                a.add_col(j, t, &q);
                if let Some((_, rt)) = tr.as_mut() {
                    rt.add_col(j, t, &q);
                }
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    if let Some((l, _)) = tr.as_mut() {
                        l.add_row(t, i, &BigInt::one());
                    }
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some((l, _)) = tr.as_mut() {
                l.negate_row(t);
            }
        }
    }

    let diag = (0..n).map(|i| a.get(i, i).clone()).collect();
    (diag, tr)
}

/// gcd of all `k x k` minors, by enumeration. Test oracle for small matrices.
pub fn minor_gcd(m: &IntMatrix, k: usize) -> Result<BigInt> {
    if k > m.rows.min(m.cols) {
        return Err(Error::MinorOrder {
            k,
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.rows > MINOR_GCD_LIMIT || m.cols > MINOR_GCD_LIMIT {
        return Err(Error::MatrixTooLarge {
            rows: m.rows,
            cols: m.cols,
            limit: MINOR_GCD_LIMIT,
        });
    }
    if k == 0 {
        return Ok(BigInt::one());
    }
    let mut g = BigInt::zero();
    for rs in (0..m.rows).combinations(k) {
        for cs in (0..m.cols).combinations(k) {
            let sub = rs
                .iter()
                .flat_map(|&i| cs.iter().map(move |&j| m.get(i, j).clone()))
                .collect();
            g = g.gcd(&bareiss(k, sub));
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

/// `Z^rows / (column span of m)` in canonical form.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let diag = smith_diagonal(m);
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    AbelianGroup::from_cyclic_factors(m.rows - nonzero, diag.into_iter().filter(|d| !d.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn bs(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| b(x)).collect()
    }

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert!(s.left.is_unimodular() && s.right.is_unimodular());
        let prod = s.left.mul(m).unwrap().mul(&s.right).unwrap();
        assert_eq!(prod, IntMatrix::diagonal(m.rows(), m.cols(), &s.diagonal));
        for w in s.diagonal.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
        assert_eq!(smith_diagonal(m), s.diagonal);
        s
    }

    #[test]
    fn gcd_list_examples() {
        assert_eq!(gcd_list(&bs(&[6, -4, 10])), b(2));
        assert_eq!(gcd_list(&bs(&[])), b(0));
        assert_eq!(gcd_list(&bs(&[0, 0, 7])), b(7));
        assert_eq!(gcd_list(&bs(&[0, 0])), b(0));
    }

    #[test]
    fn snf_identity() {
        assert_eq!(check_snf(&IntMatrix::identity(3)).diagonal, bs(&[1, 1, 1]));
    }

    #[test]
    fn snf_sphere_relation_matrix() {
        for u in -6i64..=6 {
            for s in -4i64..=4 {
                let m = IntMatrix::from_rows(&[
                    &[0, 1 - u, 0],
                    &[0, 0, 1 - u],
                    &[-1, 1 - 2 * s + u, -u * u + s * (1 - s + u)],
                ]);
                let k = (1 - u).abs();
                assert_eq!(check_snf(&m).diagonal, bs(&[1, k, k]), "u={u} s={s}");
            }
        }
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let m = IntMatrix::from_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16], &[0, 0, 0]]);
        assert_eq!(check_snf(&m).diagonal, bs(&[2, 6, 12]));
        assert_eq!(check_snf(&IntMatrix::zeros(2, 3)).diagonal, bs(&[0, 0]));
        assert_eq!(check_snf(&IntMatrix::zeros(0, 3)).diagonal, bs(&[]));
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(check_snf(&m).diagonal, bs(&[1, 6]));
    }

    #[test]
    fn minor_gcd_examples() {
        assert_eq!(minor_gcd(&IntMatrix::identity(2), 2).unwrap(), b(1));
        assert_eq!(minor_gcd(&IntMatrix::from_rows(&[&[2, 4], &[6, 8]]), 2).unwrap(), b(8));
        assert_eq!(minor_gcd(&IntMatrix::from_rows(&[&[2, 4], &[6, 8]]), 1).unwrap(), b(2));
        assert_eq!(minor_gcd(&IntMatrix::zeros(2, 2), 0).unwrap(), b(1));
        assert!(matches!(
            minor_gcd(&IntMatrix::identity(2), 3),
            Err(Error::MinorOrder { k: 3, .. })
        ));
        assert!(matches!(
            minor_gcd(&IntMatrix::identity(11), 1),
            Err(Error::MatrixTooLarge { .. })
        ));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::zeros(3, 0)), AbelianGroup::free(3));
        let d = IntMatrix::diagonal(3, 3, &bs(&[1, 2, 6]));
        assert_eq!(cokernel(&d), AbelianGroup::from_cyclic_factors(0, bs(&[2, 6])));
        let u = -2;
        let s = 0;
        let m = IntMatrix::from_rows(&[
            &[0, 1 - u, 0],
            &[0, 0, 1 - u],
            &[-1, 1 - 2 * s + u, -u * u + s * (1 - s + u)],
        ]);
        assert_eq!(cokernel(&m).to_string(), "Z/3 + Z/3");
    }

    #[test]
    fn determinant_values() {
        let m = IntMatrix::from_rows(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]]);
        assert_eq!(m.determinant().unwrap(), b(-3));
        assert_eq!(IntMatrix::zeros(0, 0).determinant().unwrap(), b(1));
        assert!(IntMatrix::zeros(2, 3).determinant().is_err());
    }

    #[test]
    fn group_canonical_form_and_text() {
        let g = AbelianGroup::from_cyclic_factors(1, bs(&[4, 6, 1, 0]));
        assert_eq!(g.free_rank(), 2);
        assert_eq!(g.torsion(), &bs(&[2, 12])[..]);
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/12");
        assert_eq!(g.compact(), "Z^2+Z2+Z12");
        assert_eq!(AbelianGroup::cyclic(3).compact(), "Z3");
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        assert_eq!(AbelianGroup::free(1).to_string(), "Z");
        assert_eq!(
            AbelianGroup::cyclic(2).direct_sum(&AbelianGroup::cyclic(3)),
            AbelianGroup::cyclic(6)
        );
        assert_eq!(AbelianGroup::cyclic(6).order(), Some(b(6)));
        assert_eq!(AbelianGroup::free(1).order(), None);
        for text in ["0", "Z", "Z^2 + Z/2 + Z/12", "Z/3 + Z/3"] {
            assert_eq!(text.parse::<AbelianGroup>().unwrap().to_string(), text);
        }
        assert_eq!("Z2+Z4".parse::<AbelianGroup>().unwrap().to_string(), "Z/2 + Z/4");
        assert!("Q".parse::<AbelianGroup>().is_err());
        assert!("Z/0".parse::<AbelianGroup>().is_err());
    }

    #[test]
    fn group_json_round_trip() {
        let g = AbelianGroup::from_cyclic_factors(1, bs(&[3, 3]));
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"free_rank":1,"torsion":[3,3],"text":"Z + Z/3 + Z/3"}"#);
        assert_eq!(serde_json::from_str::<AbelianGroup>(&s).unwrap(), g);
    }
}
