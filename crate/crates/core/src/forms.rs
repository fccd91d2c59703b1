//! Finite two-person game forms and their structural predicates.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A set of outcome indices.
pub type OutcomeSet = FixedBitSet;

/// Row or column of a game form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Situation {
    pub x: usize,
    pub y: usize,
}

impl Situation {
    pub fn new(x: usize, y: usize) -> Self {
        Situation { x, y }
    }
}

/// Table `g : X × Y → O` with dense outcome ids `0..|O|`, every one of them used.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameForm {
    rows: usize,
    cols: usize,
    num_outcomes: usize,
    table: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl GameForm {
    /// Builds a form from a row-major table. The outcome count is inferred as
    /// `max + 1` and every id below it must appear.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let rows = table.len();
        if rows == 0 {
            return Err(Error::InvalidForm("no rows".into()));
        }
        let cols = table[0].len();
        if cols == 0 {
            return Err(Error::InvalidForm("no columns".into()));
        }
        if let Some(bad) = table.iter().position(|r| r.len() != cols) {
            return Err(Error::InvalidForm(format!(
                "row {bad} has {} entries, expected {cols}",
                table[bad].len()
            )));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let num_outcomes = flat.iter().max().map_or(0, |m| m + 1);
        Self::from_flat(rows, cols, num_outcomes, flat)
    }

    /// Builds a form with a declared outcome count; fails if `g` is not surjective.
    pub fn from_flat(rows: usize, cols: usize, num_outcomes: usize, table: Vec<usize>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidForm("empty table".into()));
        }
        if table.len() != rows * cols {
            return Err(Error::InvalidForm(format!(
                "expected {} cells, got {}",
                rows * cols,
                table.len()
            )));
        }
        let mut seen = vec![false; num_outcomes];
        for &o in &table {
            if o >= num_outcomes {
                return Err(Error::InvalidForm(format!(
                    "outcome {o} outside 0..{num_outcomes}"
                )));
            }
            seen[o] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidForm(format!(
                "outcome {missing} never occurs (g must be surjective)"
            )));
        }
        Ok(GameForm {
            rows,
            cols,
            num_outcomes,
            table,
            labels: None,
        })
    }

    /// Relabels arbitrary ids densely in order of first appearance (row-major).
    /// Returns the form and, per new outcome, the original id.
    pub fn compact(rows: usize, cols: usize, cells: &[usize]) -> Result<(Self, Vec<usize>)> {
        let mut original = Vec::new();
        let mut map = std::collections::HashMap::new();
        let table = cells
            .iter()
            .map(|&c| {
                *map.entry(c).or_insert_with(|| {
                    original.push(c);
                    original.len() - 1
                })
            })
            .collect();
        let n = original.len();
        Ok((Self::from_flat(rows, cols, n, table)?, original))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.num_outcomes {
            return Err(Error::InvalidForm(format!(
                "{} labels for {} outcomes",
                labels.len(),
                self.num_outcomes
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.table[x * self.cols + y]
    }

    pub fn cells(&self) -> &[usize] {
        &self.table
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.cols..(x + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.rows).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn transpose(&self) -> GameForm {
        let mut table = Vec::with_capacity(self.table.len());
        for y in 0..self.cols {
            for x in 0..self.rows {
                table.push(self.get(x, y));
            }
        }
        GameForm {
            rows: self.cols,
            cols: self.rows,
            num_outcomes: self.num_outcomes,
            table,
            labels: self.labels.clone(),
        }
    }

    pub fn row_support(&self, x: usize) -> OutcomeSet {
        let mut s = OutcomeSet::with_capacity(self.num_outcomes);
        for &o in self.row(x) {
            s.insert(o);
        }
        s
    }

    pub fn col_support(&self, y: usize) -> OutcomeSet {
        let mut s = OutcomeSet::with_capacity(self.num_outcomes);
        for x in 0..self.rows {
            s.insert(self.get(x, y));
        }
        s
    }

    /// Supports of all of Alice's and all of Bob's strategies.
    pub fn supports(&self) -> (Vec<OutcomeSet>, Vec<OutcomeSet>) {
        (
            (0..self.rows).map(|x| self.row_support(x)).collect(),
            (0..self.cols).map(|y| self.col_support(y)).collect(),
        )
    }

    /// Strategies whose support is inclusion-minimal among their side.
    pub fn basic_strategies(&self) -> (FixedBitSet, FixedBitSet) {
        let (rs, cs) = self.supports();
        (minimal_members(&rs), minimal_members(&cs))
    }

    pub fn is_simple(&self, x: usize, y: usize) -> Result<bool> {
        if x >= self.rows {
            return Err(Error::IndexOutOfRange {
                what: "row",
                index: x,
                size: self.rows,
            });
        }
        if y >= self.cols {
            return Err(Error::IndexOutOfRange {
                what: "column",
                index: y,
                size: self.cols,
            });
        }
        let mut common = self.row_support(x);
        common.intersect_with(&self.col_support(y));
        Ok(common.count_ones(..) == 1)
    }

    /// Every outcome's preimage is a combinatorial box `X' × Y'`.
    pub fn is_rectangular(&self) -> bool {
        let n = self.num_outcomes;
        let mut rows_of = vec![FixedBitSet::with_capacity(self.rows); n];
        let mut cols_of = vec![FixedBitSet::with_capacity(self.cols); n];
        let mut count = vec![0usize; n];
        for x in 0..self.rows {
            for y in 0..self.cols {
                let o = self.get(x, y);
                rows_of[o].insert(x);
                cols_of[o].insert(y);
                count[o] += 1;
            }
        }
        (0..n).all(|o| rows_of[o].count_ones(..) * cols_of[o].count_ones(..) == count[o])
    }

    /// Relabels outcomes by first appearance, so forms equal up to outcome
    /// renaming map to the same table.
    pub fn canonical_relabeling(&self) -> GameForm {
        Self::compact(self.rows, self.cols, &self.table)
            .expect("relabeling a valid form")
            .0
    }

    /// Applies `class[o]` to every cell; classes are compacted to `0..k`.
    pub fn relabel(&self, class: &[usize]) -> Result<GameForm> {
        if class.len() != self.num_outcomes {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} outcomes, form has {}",
                class.len(),
                self.num_outcomes
            )));
        }
        let mut used: Vec<usize> = class.to_vec();
        used.sort_unstable();
        used.dedup();
        let dense: Vec<usize> = class
            .iter()
            .map(|c| used.binary_search(c).expect("class present"))
            .collect();
        let table = self.table.iter().map(|&o| dense[o]).collect();
        GameForm::from_flat(self.rows, self.cols, used.len(), table)
    }
}

/// Indices of sets that have no proper subset among the others.
pub(crate) fn minimal_members(sets: &[OutcomeSet]) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(sets.len());
    for (i, s) in sets.iter().enumerate() {
        let dominated = sets
            .iter()
            .any(|t| t.is_subset(s) && t.count_ones(..) < s.count_ones(..));
        if !dominated {
            out.insert(i);
        }
    }
    out
}

/// The nine golden forms, outcomes `o1..o6` as `0..5`.
pub mod corpus {
    use super::GameForm;

    fn form(rows: &[&[usize]]) -> GameForm {
        let table = rows
            .iter()
            .map(|r| r.iter().map(|&o| o - 1).collect())
            .collect();
        GameForm::new(table).expect("golden form is valid")
    }

    pub fn g1() -> GameForm {
        form(&[&[1, 1], &[2, 3]])
    }
    pub fn g2() -> GameForm {
        form(&[&[1, 1, 2, 2], &[3, 4, 3, 4]])
    }
    pub fn g3() -> GameForm {
        form(&[&[1, 1, 3], &[1, 2, 2], &[3, 2, 3]])
    }
    pub fn g4() -> GameForm {
        form(&[&[1, 1, 3], &[1, 1, 2], &[4, 2, 2]])
    }
    pub fn g5() -> GameForm {
        form(&[&[1, 2, 1, 2], &[3, 4, 4, 3], &[1, 4, 1, 5], &[3, 2, 6, 2]])
    }
    pub fn g6() -> GameForm {
        form(&[&[1, 1], &[1, 2]])
    }
    pub fn g7() -> GameForm {
        form(&[&[1, 2], &[2, 1]])
    }
    pub fn g8() -> GameForm {
        form(&[&[1, 1, 2], &[3, 4, 3]])
    }
    pub fn g9() -> GameForm {
        form(&[&[1, 1, 2], &[4, 5, 2], &[4, 3, 3]])
    }

    /// `g1..g9` in order.
    pub fn golden() -> Vec<GameForm> {
        vec![g1(), g2(), g3(), g4(), g5(), g6(), g7(), g8(), g9()]
    }
}

#[cfg(test)]
mod tests {
    use super::corpus::*;
    use super::*;

    fn set(items: &[usize], n: usize) -> OutcomeSet {
        let mut s = OutcomeSet::with_capacity(n);
        for &i in items {
            s.insert(i);
        }
        s
    }

    #[test]
    fn supports_of_g6_and_g1() {
        let (rs, _) = g6().supports();
        assert_eq!(rs, vec![set(&[0], 2), set(&[0, 1], 2)]);
        let (rs, cs) = g1().supports();
        assert_eq!(rs, vec![set(&[0], 3), set(&[1, 2], 3)]);
        assert_eq!(cs, vec![set(&[0, 1], 3), set(&[0, 2], 3)]);
    }

    #[test]
    fn single_cell_form() {
        let g = GameForm::new(vec![vec![0]]).unwrap();
        let (rs, cs) = g.supports();
        assert_eq!(rs, vec![set(&[0], 1)]);
        assert_eq!(cs, vec![set(&[0], 1)]);
        assert!(g.is_simple(0, 0).unwrap());
        assert!(g.is_rectangular());
    }

    #[test]
    fn basic_strategies_follow_minimal_support() {
        let (r, c) = g6().basic_strategies();
        assert_eq!(r.ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(c.ones().collect::<Vec<_>>(), vec![0]);
        for g in golden().iter().filter(|g| **g != g6()) {
            let (r, c) = g.basic_strategies();
            assert_eq!(r.count_ones(..), g.rows());
            assert_eq!(c.count_ones(..), g.cols());
        }
        let dup = GameForm::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(dup.basic_strategies().0.count_ones(..), 2);
    }

    #[test]
    fn simple_situations_of_golden_forms() {
        let g7 = g7();
        for x in 0..2 {
            for y in 0..2 {
                assert!(!g7.is_simple(x, y).unwrap());
            }
        }
        let g3 = g3();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(g3.is_simple(x, y).unwrap(), x != y, "g3 ({x},{y})");
            }
        }
        let g4 = g4();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(g4.is_simple(x, y).unwrap(), (x, y) != (1, 1));
            }
        }
        let g6 = g6();
        assert!(!g6.is_simple(1, 1).unwrap());
        assert!(g6.is_simple(0, 0).unwrap() && g6.is_simple(0, 1).unwrap() && g6.is_simple(1, 0).unwrap());
        assert!(g7.is_simple(2, 0).is_err());
    }

    #[test]
    fn rectangular_golden_forms() {
        let expected = [true, true, false, false, false, false, false, true, true];
        for (g, want) in golden().iter().zip(expected) {
            assert_eq!(g.is_rectangular(), want);
            let all_simple = (0..g.rows())
                .all(|x| (0..g.cols()).all(|y| g.is_simple(x, y).unwrap()));
            assert_eq!(all_simple, want);
        }
        let wide = GameForm::new(vec![vec![0, 1, 0, 2]]).unwrap();
        assert!(wide.is_rectangular());
    }

    #[test]
    fn non_surjective_table_is_rejected() {
        assert!(GameForm::from_flat(1, 2, 3, vec![0, 2]).is_err());
        assert!(GameForm::new(vec![vec![0, 1], vec![0]]).is_err());
    }

    #[test]
    fn relabel_merges_classes() {
        let merged = g2().relabel(&[0, 0, 1, 2]).unwrap();
        assert_eq!(merged.num_outcomes(), 3);
        assert_eq!(merged.row(0), &[0, 0, 0, 0]);
    }
}
