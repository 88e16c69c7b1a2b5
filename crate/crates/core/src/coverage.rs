//! Combination matrix: one row per t-sized parameter combination, one column
//! per value-index vector, each cell counting how many solution rows cover
//! that value combination. `-1` marks cells that can never be covered,
//! either because a value index falls outside some parameter's domain
//! (rectangular padding for mixed-level models) or because the combination
//! contains a forbidden tuple.

use crate::combinatorics::{combination_rank, for_each_combination};
use crate::constraints::ForbiddenTupleSet;
use crate::model::{Assignment, ParameterSpace, PartialTuple, Strength, TestCase};

/// Cell sentinel for combinations that cannot occur in any valid test case.
pub const NONEXISTENT: i32 = -1;

/// Coverage counters for every t-wise value combination of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationMatrix {
    space: ParameterSpace,
    t: Strength,
    /// Ascending lexicographic t-sized parameter combinations, one per row.
    row_params: Vec<Vec<usize>>,
    ncols: usize,
    max_domain: usize,
    /// Row-major cells: NONEXISTENT or a cover count.
    cells: Vec<i32>,
    coverable: usize,
    uncovered: usize,
    multi_covered: usize,
}

/// Cells touched by one cover/uncover call, for exact undo.
#[derive(Debug, Clone)]
pub struct CoverageDelta {
    cells: Vec<(usize, usize)>,
    delta: i32,
}

impl CombinationMatrix {
    /// Builds the matrix with every in-domain cell at 0 and out-of-domain
    /// cells at the sentinel.
    pub fn build(space: &ParameterSpace, t: Strength) -> CombinationMatrix {
        let k = space.k();
        let max_domain = space.max_domain_size();
        let ncols = max_domain.pow(t.get() as u32);
        let mut row_params = Vec::new();
        for_each_combination(k, t.get(), |combo| row_params.push(combo.to_vec()));

        let mut cells = vec![0i32; row_params.len() * ncols];
        let mut coverable = 0usize;
        for (r, params) in row_params.iter().enumerate() {
            for c in 0..ncols {
                let in_domain = digits_of(c, t.get(), max_domain)
                    .iter()
                    .zip(params)
                    .all(|(&v, &p)| v < space.domain_size(p));
                if in_domain {
                    coverable += 1;
                } else {
                    cells[r * ncols + c] = NONEXISTENT;
                }
            }
        }
        let uncovered = coverable;
        CombinationMatrix {
            space: space.clone(),
            t,
            row_params,
            ncols,
            max_domain,
            cells,
            coverable,
            uncovered,
            multi_covered: 0,
        }
    }

    /// Marks every cell whose combination contains a forbidden tuple with the
    /// sentinel. Expects a freshly built (all-zero) matrix.
    pub fn clean(&mut self, set: &ForbiddenTupleSet) {
        for r in 0..self.row_params.len() {
            for c in 0..self.ncols {
                let i = r * self.ncols + c;
                if self.cells[i] == NONEXISTENT {
                    continue;
                }
                debug_assert_eq!(self.cells[i], 0, "clean expects an uncovered matrix");
                let tuple = self.tuple_at(r, c).expect("in-domain cell");
                if set.tuple_forbidden(&tuple) {
                    self.cells[i] = NONEXISTENT;
                    self.coverable -= 1;
                    self.uncovered -= 1;
                }
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.row_params.len()
    }

    pub fn cols(&self) -> usize {
        self.ncols
    }

    pub fn strength(&self) -> Strength {
        self.t
    }

    pub fn cell(&self, row: usize, col: usize) -> i32 {
        self.cells[row * self.ncols + col]
    }

    /// Parameter indices addressed by a row, ascending.
    pub fn row_parameters(&self, row: usize) -> &[usize] {
        &self.row_params[row]
    }

    /// The value combination a cell stands for; `None` for out-of-domain
    /// padding cells.
    pub fn tuple_at(&self, row: usize, col: usize) -> Option<PartialTuple> {
        let params = &self.row_params[row];
        let digits = digits_of(col, self.t.get(), self.max_domain);
        let mut assignments = Vec::with_capacity(params.len());
        for (&p, &v) in params.iter().zip(&digits) {
            if v >= self.space.domain_size(p) {
                return None;
            }
            assignments.push(Assignment::new(p, v));
        }
        PartialTuple::from_assignments(assignments)
    }

    /// Inverse of [`tuple_at`](Self::tuple_at) for full-size tuples.
    pub fn cell_for_tuple(&self, tuple: &PartialTuple) -> (usize, usize) {
        assert_eq!(tuple.len(), self.t.get(), "tuple size must equal strength");
        let params: Vec<usize> = tuple.assignments().iter().map(|a| a.parameter).collect();
        let row = combination_rank(self.space.k(), &params);
        let mut col = 0usize;
        for a in tuple.assignments() {
            col = col * self.max_domain + a.value;
        }
        (row, col)
    }

    /// Number of cells that can still be covered (in-domain, not forbidden).
    pub fn coverable_count(&self) -> usize {
        self.coverable
    }

    /// Number of coverable cells at count 0.
    pub fn uncovered_count(&self) -> usize {
        self.uncovered
    }

    /// Number of cells covered by two or more solution rows.
    pub fn multi_covered_count(&self) -> usize {
        self.multi_covered
    }

    /// Count of coverable cells covered at least once.
    pub fn coverage_score(&self) -> usize {
        self.coverable - self.uncovered
    }

    /// Increments the C(k,t) cells addressed by the test case. The caller
    /// must pass a valid test case: addressing a sentinel cell is a logic
    /// fault and panics.
    pub fn cover_combinations(&mut self, tc: &TestCase) -> CoverageDelta {
        self.apply(tc, 1)
    }

    /// Decrements the cells addressed by the test case; inverse of
    /// [`cover_combinations`](Self::cover_combinations). Decrementing a cell
    /// at 0 (or a sentinel) is a logic fault and panics.
    pub fn uncover_combinations(&mut self, tc: &TestCase) -> CoverageDelta {
        self.apply(tc, -1)
    }

    /// Reverses a previous delta.
    pub fn undo(&mut self, delta: &CoverageDelta) {
        for &(row, col) in &delta.cells {
            self.bump(row, col, -delta.delta);
        }
    }

    fn apply(&mut self, tc: &TestCase, delta: i32) -> CoverageDelta {
        assert_eq!(tc.len(), self.space.k());
        let mut touched = Vec::with_capacity(self.row_params.len());
        for row in 0..self.row_params.len() {
            let mut col = 0usize;
            for &p in &self.row_params[row] {
                col = col * self.max_domain + tc.value(p);
            }
            self.bump(row, col, delta);
            touched.push((row, col));
        }
        CoverageDelta {
            cells: touched,
            delta,
        }
    }

    fn bump(&mut self, row: usize, col: usize, delta: i32) {
        let i = row * self.ncols + col;
        let old = self.cells[i];
        assert!(old != NONEXISTENT, "covering a nonexistent combination");
        let new = old + delta;
        assert!(new >= 0, "uncovering an uncovered combination");
        self.cells[i] = new;
        if old == 0 && new > 0 {
            self.uncovered -= 1;
        } else if old > 0 && new == 0 {
            self.uncovered += 1;
        }
        if old < 2 && new >= 2 {
            self.multi_covered += 1;
        } else if old >= 2 && new < 2 {
            self.multi_covered -= 1;
        }
    }

    /// All coverable combinations currently at count 0, row-major order.
    pub fn uncovered_tuples(&self) -> Vec<PartialTuple> {
        let mut out = Vec::with_capacity(self.uncovered);
        for r in 0..self.row_params.len() {
            for c in 0..self.ncols {
                if self.cells[r * self.ncols + c] == 0 {
                    out.push(self.tuple_at(r, c).expect("in-domain cell"));
                }
            }
        }
        out
    }

    /// Bordered text rendering with `(p,q)` row labels and `(v,w)` column
    /// labels, for eyeballing and golden files.
    pub fn render(&self) -> String {
        let col_label = |c: usize| {
            let digits = digits_of(c, self.t.get(), self.max_domain);
            let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
            format!("({})", parts.join(","))
        };
        let row_label = |r: usize| {
            let parts: Vec<String> = self.row_params[r].iter().map(|p| p.to_string()).collect();
            format!("({})", parts.join(","))
        };
        let width = (0..self.ncols)
            .map(|c| col_label(c).len())
            .chain(std::iter::once(2))
            .max()
            .unwrap()
            + 1;
        let label_width = (0..self.rows()).map(|r| row_label(r).len()).max().unwrap_or(2);

        let mut out = String::new();
        out.push_str(&" ".repeat(label_width));
        for c in 0..self.ncols {
            out.push_str(&format!("{:>width$}", col_label(c)));
        }
        out.push('\n');
        for r in 0..self.rows() {
            out.push_str(&format!("{:<label_width$}", row_label(r)));
            for c in 0..self.ncols {
                out.push_str(&format!("{:>width$}", self.cell(r, c)));
            }
            out.push('\n');
        }
        out
    }
}

/// Big-endian digits of `col` in base `radix`, `t` digits.
fn digits_of(col: usize, t: usize, radix: usize) -> Vec<usize> {
    let mut digits = vec![0usize; t];
    let mut rest = col;
    for i in (0..t).rev() {
        digits[i] = rest % radix;
        rest /= radix;
    }
    digits
}
