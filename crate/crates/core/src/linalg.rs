//! Row-echelon forms over a finite-precision valuation ring.
//!
//! Pivots are chosen with minimal valuation in the working column (ties go to
//! the lowest original row index). Eliminated entries become exact zeros.
//! The loss of absolute precision is bounded by the sum of the pivot
//! valuations, which is also the smallest valuation of a maximal minor on the
//! echelonized columns.
//!
//! Rows may be longer than the matrix width: the extra trailing entries (for
//! instance coordinates of each row in terms of the input generators) follow
//! every row operation but never host a pivot.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::cdvf::{Cdvf, CdvfError, Valuation};
use crate::poly::Monomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("column {column}: remaining entries are indistinguishable from zero")]
    AmbiguousColumn { column: usize },
    #[error("pivot entry has no certified valuation")]
    UncertifiedPivot,
    #[error("{count} minors exceed the enumeration limit")]
    TooManyMinors { count: u128 },
    #[error("minor valuation cannot be certified at the available precision")]
    UncertifiableMinor,
    #[error(transparent)]
    Arithmetic(#[from] CdvfError),
}

/// Row label of a Macaulay matrix: the row is `multiplier * f_generator`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub generator: usize,
    pub multiplier: Monomial,
}

/// Dense matrix; rows may carry trailing entries beyond `ncols`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: Vec<Vec<Cdvf>>,
    pub ncols: usize,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<Cdvf>>, ncols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() >= ncols));
        Matrix { rows, ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Cdvf {
        &self.rows[i][j]
    }

    /// Column of the first certified nonzero entry of row `i`, if any.
    pub fn index_of_row(&self, i: usize) -> Option<usize> {
        self.rows[i][..self.ncols].iter().position(|e| e.valuation().finite().is_some())
    }

    /// Smallest order over the entries of the main block.
    pub fn min_order(&self) -> Option<i64> {
        self.rows
            .iter()
            .flat_map(|r| r[..self.ncols].iter())
            .filter_map(Cdvf::order)
            .min()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r[..self.ncols].iter().map(|e| e.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{:>w$}", c, w = width)).collect();
            writeln!(f, "[{}]", line.join("  "))?;
        }
        Ok(())
    }
}

/// Matrix with signature row labels and monomial column labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledMatrix {
    pub matrix: Matrix,
    pub row_labels: Vec<Signature>,
    /// Decreasing for the ambient order.
    pub column_labels: Vec<Monomial>,
}

impl LabeledMatrix {
    /// Reorders the rows according to an echelon permutation.
    pub fn permuted(&self, echelon: Matrix, report: &EchelonReport) -> LabeledMatrix {
        LabeledMatrix {
            matrix: echelon,
            row_labels: report.permutation.iter().map(|&i| self.row_labels[i].clone()).collect(),
            column_labels: self.column_labels.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    /// Original row index.
    pub row: usize,
    /// Position of the pivot row in the echelon output.
    pub position: usize,
    pub column: usize,
    pub valuation: i64,
    /// No entry of the column that is indistinguishable from zero could have
    /// a smaller valuation.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonReport {
    pub pivots: Vec<Pivot>,
    /// `permutation[k]` is the original index of output row `k`.
    pub permutation: Vec<usize>,
    /// Sum of pivot valuations.
    pub loss_bound: i64,
    /// Number of leading columns that were echelonized: the 0-based index of
    /// the first column without a certified pivot, or the width when every
    /// column was processed.
    pub stop_column: usize,
}

/// `L_target <- L_target - (M[target][col] / M[pivot][col]) * L_pivot`, with
/// `M[target][col]` set to an exact zero. Columns before `col` are untouched
/// (they are exact zeros in both rows during echelonization).
pub fn pivot_eliminate(
    m: &mut Matrix,
    pivot_row: usize,
    target_row: usize,
    col: usize,
) -> Result<(), LinalgError> {
    let piv = m.rows[pivot_row][col].clone();
    if piv.valuation().finite().is_none() {
        return Err(LinalgError::UncertifiedPivot);
    }
    let e = std::mem::replace(&mut m.rows[target_row][col], Cdvf::ZERO);
    if e.is_exact_zero() {
        return Ok(());
    }
    let q = e.try_div(&piv)?;
    let (p, t) = if pivot_row < target_row {
        let (a, b) = m.rows.split_at_mut(target_row);
        (&a[pivot_row], &mut b[0])
    } else {
        let (a, b) = m.rows.split_at_mut(pivot_row);
        (&b[0], &mut a[target_row])
    };
    for j in col + 1..p.len() {
        if p[j].is_exact_zero() {
            continue;
        }
        let prod = q.try_mul(&p[j])?;
        t[j] = t[j].try_sub(&prod)?;
    }
    Ok(())
}

enum ColumnScan {
    Pivot(usize, i64, bool),
    AllExactZero,
    Ambiguous,
}

fn scan_column(m: &Matrix, perm: &[usize], from: usize, col: usize) -> ColumnScan {
    let mut best: Option<(i64, usize, usize)> = None;
    let mut ambiguous = false;
    let mut floor: Option<i64> = None;
    for i in from..m.nrows() {
        match m.rows[i][col].valuation() {
            Valuation::Finite(v) => {
                let key = (v, perm[i], i);
                if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
            Valuation::Undefined => {
                ambiguous = true;
                let o = m.rows[i][col].order().unwrap_or(i64::MIN);
                floor = Some(floor.map_or(o, |f| f.min(o)));
            }
            Valuation::Infinite => {}
        }
    }
    match best {
        Some((v, _, i)) => ColumnScan::Pivot(i, v, floor.is_none_or(|f| f >= v)),
        None if ambiguous => ColumnScan::Ambiguous,
        None => ColumnScan::AllExactZero,
    }
}

fn echelon(m: &Matrix, prefix: bool) -> Result<(Matrix, EchelonReport), LinalgError> {
    let mut w = m.clone();
    let mut perm: Vec<usize> = (0..m.nrows()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut stop = m.ncols;
    for col in 0..m.ncols {
        if r == w.nrows() {
            if prefix {
                stop = col;
            }
            break;
        }
        let scan = scan_column(&w, &perm, r, col);
        match scan {
            ColumnScan::Pivot(i, v, certified) => {
                w.rows.swap(r, i);
                perm.swap(r, i);
                for t in r + 1..w.nrows() {
                    pivot_eliminate(&mut w, r, t, col)?;
                }
                pivots.push(Pivot { row: perm[r], position: r, column: col, valuation: v, certified });
                r += 1;
            }
            _ if prefix => {
                stop = col;
                break;
            }
            ColumnScan::Ambiguous => return Err(LinalgError::AmbiguousColumn { column: col }),
            ColumnScan::AllExactZero => {}
        }
    }
    let loss_bound = pivots.iter().map(|p| p.valuation).sum();
    Ok((w, EchelonReport { pivots, permutation: perm, loss_bound, stop_column: stop }))
}

/// Full row-echelon form (up to the recorded permutation).
pub fn row_echelon(m: &Matrix) -> Result<(Matrix, EchelonReport), LinalgError> {
    echelon(m, false)
}

/// Echelonizes the leading columns up to the first one without a certified
/// pivot among the remaining rows; that column index is `stop_column`.
pub fn row_echelon_prefix(m: &Matrix) -> Result<(Matrix, EchelonReport), LinalgError> {
    echelon(m, true)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Smallest valuation of an `l x l` minor on the first `l` columns; `None`
/// when every such minor vanishes exactly.
pub fn min_minor_valuation(m: &Matrix, l: usize) -> Result<Option<i64>, LinalgError> {
    let n = m.nrows();
    let count = binomial(n, l);
    if count > 1_000_000 || n > 63 {
        return Err(LinalgError::TooManyMinors { count });
    }
    if l == 0 {
        return Ok(Some(0));
    }
    // det over rows S and columns 0..|S|, by expansion along the last column
    let mut level: HashMap<u64, Cdvf> = HashMap::new();
    level.insert(0, Cdvf::ZERO);
    for k in 1..=l {
        let mut next = HashMap::new();
        for s in subsets(n, k) {
            let mut acc = Cdvf::ZERO;
            let mut pos = 0;
            for r in 0..n {
                if s & (1 << r) == 0 {
                    continue;
                }
                let entry = &m.rows[r][k - 1];
                if !entry.is_exact_zero() {
                    let sub = if k == 1 { None } else { Some(&level[&(s & !(1 << r))]) };
                    let term = match sub {
                        None => entry.clone(),
                        Some(d) => entry.try_mul(d)?,
                    };
                    acc = if (pos + k - 1) % 2 == 0 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
                }
                pos += 1;
            }
            next.insert(s, acc);
        }
        level = next;
    }
    let mut best: Option<i64> = None;
    let mut unsure: Option<i64> = None;
    for d in level.values() {
        match d.valuation() {
            Valuation::Finite(v) => best = Some(best.map_or(v, |b| b.min(v))),
            Valuation::Undefined => {
                let o = d.order().unwrap();
                unsure = Some(unsure.map_or(o, |u| u.min(o)));
            }
            Valuation::Infinite => {}
        }
    }
    match (best, unsure) {
        (b, None) => Ok(b),
        (Some(b), Some(u)) if b < u => Ok(Some(b)),
        _ => Err(LinalgError::UncertifiableMinor),
    }
}

fn subsets(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for i in start..=n - k {
            rec(i + 1, n, k - 1, cur | (1 << i), out);
        }
    }
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdvf::CdvfContext;
    use num_bigint::BigInt;

    fn mat(p: u64, order: i64, rows: &[&[i64]]) -> Matrix {
        let ctx = CdvfContext::padic(p).unwrap();
        let rows: Vec<Vec<Cdvf>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| ctx.from_integer(&BigInt::from(x), order)).collect())
            .collect();
        let n = rows[0].len();
        Matrix::new(rows, n)
    }

    #[test]
    fn eliminating_with_valuation_one_pivot_loses_one_digit() {
        let mut m = mat(2, 5, &[&[2, 1], &[2, 3]]);
        pivot_eliminate(&mut m, 0, 1, 0).unwrap();
        assert!(m.get(1, 0).is_exact_zero());
        assert_eq!(m.get(1, 1).order(), Some(4));
        assert_eq!(m.get(1, 1).representative().unwrap(), 2u32.into());
    }

    #[test]
    fn unit_pivot_loses_nothing() {
        let mut m = mat(5, 7, &[&[1, 3, 4], &[2, 1, 1]]);
        pivot_eliminate(&mut m, 0, 1, 0).unwrap();
        assert_eq!(m.get(1, 1).order(), Some(7));
        assert_eq!(m.get(1, 2).order(), Some(7));
    }

    #[test]
    fn two_by_two_over_z2() {
        let (e, rep) = row_echelon(&mat(2, 5, &[&[2, 1], &[2, 3]])).unwrap();
        assert_eq!(e.get(0, 0), &mat(2, 5, &[&[2]]).rows[0][0]);
        assert!(e.get(1, 0).is_exact_zero());
        assert_eq!(e.get(1, 1), &mat(2, 4, &[&[2]]).rows[0][0]);
        assert_eq!(rep.loss_bound, 2);
        assert_eq!(rep.pivots.len(), 2);
    }

    #[test]
    fn identity_is_fixed() {
        let m = mat(3, 4, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let (e, rep) = row_echelon(&m).unwrap();
        assert_eq!(rep.loss_bound, 0);
        for i in 0..3 {
            for j in 0..3 {
                assert!(e.get(i, j).order().is_none_or(|o| o >= 4));
            }
        }
    }

    #[test]
    fn ambiguous_column_is_detected() {
        let ctx = CdvfContext::padic(5).unwrap();
        let one = ctx.one(10);
        let rows = vec![
            vec![one.clone(), one.clone(), one.clone(), Cdvf::ZERO],
            vec![one.clone(), one.clone(), one.clone(), one.clone()],
        ];
        let m = Matrix::new(rows, 4);
        assert_eq!(row_echelon(&m), Err(LinalgError::AmbiguousColumn { column: 1 }));
        let (e, rep) = row_echelon_prefix(&m).unwrap();
        assert_eq!(rep.stop_column, 1);
        assert!(e.get(1, 0).is_exact_zero());
        assert!(e.get(1, 1).is_indistinguishable_from_zero());
        assert_eq!(e.get(1, 1).order(), Some(10));
        assert_eq!(e.get(1, 3), &one);
    }

    #[test]
    fn prefix_stops_at_exact_zero_column() {
        let ctx = CdvfContext::padic(3).unwrap();
        let m = Matrix::new(vec![vec![ctx.one(5), Cdvf::ZERO], vec![Cdvf::ZERO, Cdvf::ZERO]], 2);
        let (_, rep) = row_echelon_prefix(&m).unwrap();
        assert_eq!(rep.stop_column, 1);
        assert_eq!(rep.pivots.len(), 1);
        assert_eq!(rep.loss_bound, 0);
        // full echelon skips the exact-zero column instead
        let (_, rep) = row_echelon(&m).unwrap();
        assert_eq!(rep.stop_column, 2);
    }

    #[test]
    fn full_rank_prefix_covers_all_columns() {
        let m = mat(5, 6, &[&[1, 2], &[3, 4], &[0, 5]]);
        let (_, rep) = row_echelon_prefix(&m).unwrap();
        assert_eq!(rep.stop_column, 2);
    }

    #[test]
    fn ties_go_to_lowest_original_row() {
        let m = mat(5, 6, &[&[5, 1], &[1, 0], &[1, 2]]);
        let (_, rep) = row_echelon(&m).unwrap();
        assert_eq!(rep.pivots[0].row, 1);
        assert_eq!(rep.permutation[0], 1);
    }

    #[test]
    fn minor_valuations() {
        let m = mat(5, 10, &[&[1, 0], &[0, 5]]);
        assert_eq!(min_minor_valuation(&m, 2), Ok(Some(1)));
        let id = mat(7, 10, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        for l in 0..=3 {
            assert_eq!(min_minor_valuation(&id, l), Ok(Some(0)));
        }
    }

    #[test]
    fn minor_valuation_matches_pivots() {
        let m = mat(5, 20, &[&[5, 25, 1, 3], &[10, 5, 2, 4], &[25, 1, 0, 1], &[50, 50, 7, 2]]);
        let (_, rep) = row_echelon_prefix(&m).unwrap();
        let l = rep.stop_column.min(m.nrows());
        assert_eq!(min_minor_valuation(&m, l).unwrap(), Some(rep.loss_bound));
    }

    #[test]
    fn minor_guard() {
        let ctx = CdvfContext::padic(2).unwrap();
        let rows = vec![vec![ctx.one(3); 20]; 40];
        let m = Matrix::new(rows, 20);
        assert!(matches!(min_minor_valuation(&m, 20), Err(LinalgError::TooManyMinors { .. })));
    }
}
