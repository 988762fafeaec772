//! Exact linear algebra over GF(2) on bit-packed vectors.
//!
//! Rows live in machine words and elimination works word-wise with XOR.
//! All elimination is deterministic (pivot = lowest free column index), so
//! coefficient outputs and certificates are reproducible across runs.

use std::fmt;

use thiserror::Error;

/// Errors raised by the GF(2) kernel.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("vector width {found} does not match expected width {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    WrongShape { rows: usize, cols: usize, expected: usize },
    #[error("u0 is not in the span of the given generators")]
    NotInSpan,
    #[error("bit {0} of u0 is 0; the decomposition needs a unit coefficient there")]
    ZeroPivotBit(usize),
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

/// A GF(2) vector with one bit per canonical edge index of a host graph.
///
/// The width is fixed at construction; all arithmetic partners must agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeVector {
    width: usize,
    words: Vec<u64>,
}

impl EdgeVector {
    /// The zero vector of the given width.
    pub fn zero(width: usize) -> EdgeVector {
        EdgeVector { width, words: vec![0; width.div_ceil(64)] }
    }

    /// Builds a vector with exactly the given bits set.
    pub fn from_support(width: usize, support: &[usize]) -> EdgeVector {
        let mut v = EdgeVector::zero(width);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// Number of bit positions.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Reads bit `i`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.width, "bit index {i} out of width {}", self.width);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Writes bit `i`.
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.width, "bit index {i} out of width {}", self.width);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Adds `other` into `self` (XOR).
    pub fn xor_assign(&mut self, other: &EdgeVector) {
        assert_eq!(self.width, other.width, "width mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Whether all bits are zero.
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of set bits.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set bit index, if any.
    pub fn lowest_set_bit(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Indices of all set bits, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.width).filter(|&i| self.get(i)).collect()
    }

    /// Renders as a '0'/'1' string, lowest index first.
    pub fn to_bit_string(&self) -> String {
        (0..self.width).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    /// Parses a '0'/'1' string.
    pub fn from_bit_string(s: &str) -> Result<EdgeVector, Gf2Error> {
        let mut v = EdgeVector::zero(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(Gf2Error::Parse(format!("unexpected character {c:?}"))),
            }
        }
        Ok(v)
    }
}

impl fmt::Display for EdgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bit_string())
    }
}

fn check_widths(vectors: &[EdgeVector]) -> Result<usize, Gf2Error> {
    let width = vectors.first().map_or(0, EdgeVector::width);
    for v in vectors {
        if v.width() != width {
            return Err(Gf2Error::WidthMismatch { expected: width, found: v.width() });
        }
    }
    Ok(width)
}

/// Row-echelon pivot structure built from a generator list, with the
/// coefficient combination of each pivot row tracked for span queries.
struct Eliminator {
    width: usize,
    gen_count: usize,
    /// `(pivot column, reduced row, combination over the original generators)`
    pivots: Vec<(usize, EdgeVector, EdgeVector)>,
}

impl Eliminator {
    fn build(gens: &[EdgeVector]) -> Result<Eliminator, Gf2Error> {
        let width = check_widths(gens)?;
        let mut e = Eliminator { width, gen_count: gens.len(), pivots: Vec::new() };
        for (i, g) in gens.iter().enumerate() {
            let mut combo = EdgeVector::zero(gens.len());
            combo.set(i, true);
            e.insert(g.clone(), combo);
        }
        Ok(e)
    }

    fn insert(&mut self, mut row: EdgeVector, mut combo: EdgeVector) {
        for (col, prow, pcombo) in &self.pivots {
            if row.get(*col) {
                row.xor_assign(prow);
                combo.xor_assign(pcombo);
            }
        }
        if let Some(col) = row.lowest_set_bit() {
            self.pivots.push((col, row, combo));
            self.pivots.sort_by_key(|&(c, _, _)| c);
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the pivots; returns the generator combination
    /// when `v` lies in the span.
    fn solve(&self, v: &EdgeVector) -> Result<Option<EdgeVector>, Gf2Error> {
        if v.width() != self.width {
            return Err(Gf2Error::WidthMismatch { expected: self.width, found: v.width() });
        }
        let mut rest = v.clone();
        let mut combo = EdgeVector::zero(self.gen_count);
        for (col, prow, pcombo) in &self.pivots {
            if rest.get(*col) {
                rest.xor_assign(prow);
                combo.xor_assign(pcombo);
            }
        }
        Ok(if rest.is_zero() { Some(combo) } else { None })
    }
}

/// GF(2) rank of a list of equal-width vectors. The input is not modified.
pub fn rank(vectors: &[EdgeVector]) -> Result<usize, Gf2Error> {
    Ok(Eliminator::build(vectors)?.rank())
}

/// Solves `sum c_i * gens_i = v` over GF(2).
///
/// Returns the coefficient vector (one bool per generator) or `None` when
/// `v` is outside the span. Deterministic: elimination always pivots on
/// the lowest free column index.
pub fn in_span(v: &EdgeVector, gens: &[EdgeVector]) -> Result<Option<Vec<bool>>, Gf2Error> {
    let elim = Eliminator::build(gens)?;
    if !gens.is_empty() && v.width() != gens[0].width() {
        return Err(Gf2Error::WidthMismatch { expected: gens[0].width(), found: v.width() });
    }
    Ok(elim.solve(v)?.map(|combo| (0..gens.len()).map(|i| combo.get(i)).collect()))
}

/// Indices of a lexicographically first maximal independent subset of
/// `gens`: generator `i` is kept iff it is not spanned by the kept
/// generators before it.
pub fn greedy_independent_subset(gens: &[EdgeVector]) -> Result<Vec<usize>, Gf2Error> {
    check_widths(gens)?;
    let mut kept: Vec<EdgeVector> = Vec::new();
    let mut indices = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let before = rank(&kept)?;
        kept.push(g.clone());
        if rank(&kept)? > before {
            indices.push(i);
        } else {
            kept.pop();
        }
    }
    Ok(indices)
}

/// A labelled GF(2) matrix, as printed in verification reports and golden
/// fixture files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    pub col_labels: Vec<String>,
    pub row_labels: Vec<String>,
    pub rows: Vec<EdgeVector>,
}

impl GF2Matrix {
    /// Builds a matrix, checking that all rows share one width equal to
    /// the number of column labels and that labels are unique.
    pub fn new(
        col_labels: Vec<String>,
        row_labels: Vec<String>,
        rows: Vec<EdgeVector>,
    ) -> Result<GF2Matrix, Gf2Error> {
        let width = col_labels.len();
        for r in &rows {
            if r.width() != width {
                return Err(Gf2Error::WidthMismatch { expected: width, found: r.width() });
            }
        }
        assert_eq!(row_labels.len(), rows.len(), "one label per row");
        let mut sorted = col_labels.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), col_labels.len(), "column labels must be unique");
        let mut sorted = row_labels.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), row_labels.len(), "row labels must be unique");
        Ok(GF2Matrix { col_labels, row_labels, rows })
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.col_labels.len()
    }

    /// Serializes to the fixture text form: a column-label header line,
    /// then one `<row-label> <bits>` line per row.
    pub fn to_text(&self) -> String {
        let mut out = self.col_labels.join(" ");
        out.push('\n');
        for (label, row) in self.row_labels.iter().zip(&self.rows) {
            out.push_str(&format!("{label} {}\n", row.to_bit_string()));
        }
        out
    }

    /// Parses the fixture text form. Lines starting with `#` are comments.
    pub fn from_text(text: &str) -> Result<GF2Matrix, Gf2Error> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Gf2Error::Parse("missing header".into()))?;
        let col_labels: Vec<String> = header.split_whitespace().map(str::to_owned).collect();
        let mut row_labels = Vec::new();
        let mut rows = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace();
            let label = parts
                .next()
                .ok_or_else(|| Gf2Error::Parse("empty row line".into()))?
                .to_owned();
            let bits = parts
                .next()
                .ok_or_else(|| Gf2Error::Parse(format!("row {label} has no bits")))?;
            let row = EdgeVector::from_bit_string(bits)?;
            if row.width() != col_labels.len() {
                return Err(Gf2Error::WidthMismatch {
                    expected: col_labels.len(),
                    found: row.width(),
                });
            }
            row_labels.push(label);
            rows.push(row);
        }
        GF2Matrix::new(col_labels, row_labels, rows)
    }

    /// Matrix product over GF(2). Labels of the result are taken from
    /// `self` rows and `other` columns.
    pub fn multiply(&self, other: &GF2Matrix) -> Result<GF2Matrix, Gf2Error> {
        if self.col_count() != other.row_count() {
            return Err(Gf2Error::WidthMismatch {
                expected: self.col_count(),
                found: other.row_count(),
            });
        }
        let mut rows = Vec::with_capacity(self.row_count());
        for r in &self.rows {
            let mut acc = EdgeVector::zero(other.col_count());
            for k in 0..self.col_count() {
                if r.get(k) {
                    acc.xor_assign(&other.rows[k]);
                }
            }
            rows.push(acc);
        }
        GF2Matrix::new(other.col_labels.clone(), self.row_labels.clone(), rows)
    }

    /// Whether this is an identity matrix.
    pub fn is_identity(&self) -> bool {
        self.row_count() == self.col_count()
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| r.count_ones() == 1 && r.get(i))
    }
}

/// Inverts a square GF(2) matrix by Gauss-Jordan elimination; `None` when
/// singular. The inverse carries the input's labels with rows and columns
/// swapped.
pub fn invert(m: &GF2Matrix) -> Result<Option<GF2Matrix>, Gf2Error> {
    let n = m.row_count();
    if m.col_count() != n {
        return Err(Gf2Error::WrongShape { rows: n, cols: m.col_count(), expected: n });
    }
    // Augment each row with an identity block and eliminate.
    let mut work: Vec<EdgeVector> = Vec::with_capacity(n);
    for (i, r) in m.rows.iter().enumerate() {
        let mut row = EdgeVector::zero(2 * n);
        for j in 0..n {
            row.set(j, r.get(j));
        }
        row.set(n + i, true);
        work.push(row);
    }
    for col in 0..n {
        let pivot = match (col..n).find(|&r| work[r].get(col)) {
            Some(p) => p,
            None => return Ok(None),
        };
        work.swap(col, pivot);
        let pivot_row = work[col].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r != col && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
    }
    let rows: Vec<EdgeVector> = work
        .iter()
        .map(|row| {
            let mut out = EdgeVector::zero(n);
            for j in 0..n {
                out.set(j, row.get(n + j));
            }
            out
        })
        .collect();
    Ok(Some(GF2Matrix::new(m.row_labels.clone(), m.col_labels.clone(), rows)?))
}

/// Inverts a 5x5 GF(2) matrix; errors on any other shape.
pub fn invert_5x5(m: &GF2Matrix) -> Result<Option<GF2Matrix>, Gf2Error> {
    if m.row_count() != 5 || m.col_count() != 5 {
        return Err(Gf2Error::WrongShape { rows: m.row_count(), cols: m.col_count(), expected: 5 });
    }
    invert(m)
}

/// Certificate attached to a successful [`direct_sum_split`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCertificate {
    /// Rank of the input generators.
    pub rank_u: usize,
    /// Rank of the complement generators; always `rank_u - 1`.
    pub rank_w: usize,
    /// Rank of the complement together with `u0`; always `rank_u`.
    pub rank_w_plus_u0: usize,
}

/// Splits `span(U_gens)` as `W + <u0>` with `W` supported away from bit
/// `b0`, following the decomposition lemma's proof: every generator with
/// bit `b0` set is replaced by its sum with `u0`.
///
/// Requires `u0` in the span of the generators and bit `b0` of `u0` set
/// (the unit-coefficient condition, automatic over GF(2)).
pub fn direct_sum_split(
    u_gens: &[EdgeVector],
    b0: usize,
    u0: &EdgeVector,
) -> Result<(Vec<EdgeVector>, SplitCertificate), Gf2Error> {
    if in_span(u0, u_gens)?.is_none() {
        return Err(Gf2Error::NotInSpan);
    }
    if !u0.get(b0) {
        return Err(Gf2Error::ZeroPivotBit(b0));
    }
    let w_gens: Vec<EdgeVector> = u_gens
        .iter()
        .map(|g| {
            if g.get(b0) {
                let mut h = g.clone();
                h.xor_assign(u0);
                h
            } else {
                g.clone()
            }
        })
        .collect();
    debug_assert!(w_gens.iter().all(|w| !w.get(b0)));
    let rank_u = rank(u_gens)?;
    let rank_w = rank(&w_gens)?;
    let mut with_u0 = w_gens.clone();
    with_u0.push(u0.clone());
    let rank_w_plus_u0 = rank(&with_u0)?;
    Ok((w_gens, SplitCertificate { rank_u, rank_w, rank_w_plus_u0 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(bits: &str) -> EdgeVector {
        EdgeVector::from_bit_string(bits).unwrap()
    }

    #[test]
    fn bit_basics() {
        let mut v = EdgeVector::zero(70);
        assert!(v.is_zero());
        v.set(0, true);
        v.set(69, true);
        assert!(v.get(0) && v.get(69) && !v.get(1));
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.support(), vec![0, 69]);
        assert_eq!(v.lowest_set_bit(), Some(0));
    }

    #[test]
    fn rank_identity_pattern() {
        let vs = vec![ev("100"), ev("010"), ev("001")];
        assert_eq!(rank(&vs).unwrap(), 3);
        let vs = vec![ev("110"), ev("011"), ev("101")];
        assert_eq!(rank(&vs).unwrap(), 2);
        assert_eq!(rank(&[]).unwrap(), 0);
    }

    #[test]
    fn rank_row_operations_invariant() {
        let vs = vec![ev("1100"), ev("0110"), ev("0011")];
        let r = rank(&vs).unwrap();
        let mut permuted = vs.clone();
        permuted.reverse();
        assert_eq!(rank(&permuted).unwrap(), r);
        let mut summed = vs.clone();
        let add = summed[0].clone();
        summed[1].xor_assign(&add);
        assert_eq!(rank(&summed).unwrap(), r);
    }

    #[test]
    fn in_span_solves_and_verifies() {
        let gens = vec![ev("1100"), ev("0110"), ev("0011")];
        let c = in_span(&gens[0], &gens).unwrap().unwrap();
        assert_eq!(c, vec![true, false, false]);
        let target = ev("1010");
        let c = in_span(&target, &gens).unwrap().unwrap();
        let mut acc = EdgeVector::zero(4);
        for (ci, g) in c.iter().zip(&gens) {
            if *ci {
                acc.xor_assign(g);
            }
        }
        assert_eq!(acc, target);
        assert!(in_span(&ev("1000"), &gens).unwrap().is_none());
        assert!(in_span(&ev("10"), &gens).is_err());
    }

    #[test]
    fn invert_identity_and_singular() {
        let labels = |p: &str, k| (0..k).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let id = GF2Matrix::new(
            labels("c", 5),
            labels("r", 5),
            (0..5).map(|i| EdgeVector::from_support(5, &[i])).collect(),
        )
        .unwrap();
        let inv = invert_5x5(&id).unwrap().unwrap();
        assert!(inv.is_identity());

        let singular = GF2Matrix::new(
            labels("c", 5),
            labels("r", 5),
            vec![ev("11000"); 5],
        )
        .unwrap();
        assert!(invert_5x5(&singular).unwrap().is_none());

        let wrong = GF2Matrix::new(labels("c", 3), labels("r", 3), vec![ev("111"); 3]).unwrap();
        assert!(invert_5x5(&wrong).is_err());
    }

    #[test]
    fn inverse_multiplies_to_identity() {
        let labels = |p: &str, k| (0..k).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let m = GF2Matrix::new(
            labels("c", 4),
            labels("r", 4),
            vec![ev("1101"), ev("0111"), ev("1010"), ev("0001")],
        )
        .unwrap();
        let inv = invert(&m).unwrap().unwrap();
        assert!(m.multiply(&inv).unwrap().is_identity());
        assert!(inv.multiply(&m).unwrap().is_identity());
    }

    #[test]
    fn split_trivial_case() {
        let u0 = ev("101");
        let (w, cert) = direct_sum_split(&[u0.clone()], 0, &u0).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].is_zero());
        assert_eq!(cert.rank_u, 1);
        assert_eq!(cert.rank_w, 0);
        assert_eq!(cert.rank_w_plus_u0, 1);
    }

    #[test]
    fn split_rejects_bad_inputs() {
        let gens = vec![ev("110"), ev("011")];
        assert_eq!(direct_sum_split(&gens, 0, &ev("111")), Err(Gf2Error::NotInSpan));
        assert_eq!(direct_sum_split(&gens, 2, &ev("110")), Err(Gf2Error::ZeroPivotBit(2)));
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = GF2Matrix::new(
            vec!["C1".into(), "C2".into()],
            vec!["e1".into(), "e2".into(), "e3".into()],
            vec![ev("10"), ev("11"), ev("01")],
        )
        .unwrap();
        let text = m.to_text();
        let back = GF2Matrix::from_text(&text).unwrap();
        assert_eq!(m, back);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn greedy_subset_is_independent_and_spanning() {
        let gens = vec![ev("110"), ev("110"), ev("011"), ev("101"), ev("100")];
        let idx = greedy_independent_subset(&gens).unwrap();
        assert_eq!(idx, vec![0, 2, 4]);
        let chosen: Vec<EdgeVector> = idx.iter().map(|&i| gens[i].clone()).collect();
        assert_eq!(rank(&chosen).unwrap(), rank(&gens).unwrap());
    }
}
