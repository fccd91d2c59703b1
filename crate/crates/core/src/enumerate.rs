//! Exhaustive and random generators of small game forms.

use rand::Rng;

use crate::forms::GameForm;

/// Every surjective form with the given shape and at most `max_outcomes`
/// outcomes, one representative per outcome relabeling (labels appear in
/// row-major first-occurrence order).
pub fn forms_of_shape(rows: usize, cols: usize, max_outcomes: usize) -> Vec<GameForm> {
    let cells = rows * cols;
    let mut out = Vec::new();
    let mut seq = vec![0usize; cells];
    fn rec(
        i: usize,
        max_seen: usize,
        seq: &mut Vec<usize>,
        limit: usize,
        rows: usize,
        cols: usize,
        out: &mut Vec<GameForm>,
    ) {
        if i == seq.len() {
            out.push(GameForm::from_flat(rows, cols, max_seen, seq.clone()).expect("restricted growth"));
            return;
        }
        for v in 0..=max_seen.min(limit - 1) {
            seq[i] = v;
            rec(i + 1, max_seen.max(v + 1), seq, limit, rows, cols, out);
        }
    }
    seq[0] = 0;
    rec(1, 1, &mut seq, max_outcomes, rows, cols, &mut out);
    out
}

/// All canonical forms with `1 ≤ |X| ≤ max_rows`, `1 ≤ |Y| ≤ max_cols`.
pub fn all_forms(max_rows: usize, max_cols: usize, max_outcomes: usize) -> Vec<GameForm> {
    let mut out = Vec::new();
    for r in 1..=max_rows {
        for c in 1..=max_cols {
            out.extend(forms_of_shape(r, c, max_outcomes));
        }
    }
    out
}

/// Uniform random surjective form with exactly `outcomes` outcomes, canonically relabeled.
pub fn random_form<R: Rng>(rng: &mut R, rows: usize, cols: usize, outcomes: usize) -> GameForm {
    assert!(rows * cols >= outcomes && outcomes >= 1);
    loop {
        let cells: Vec<usize> = (0..rows * cols).map(|_| rng.gen_range(0..outcomes)).collect();
        if let Ok(g) = GameForm::from_flat(rows, cols, outcomes, cells) {
            return g.canonical_relabeling();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_stirling_sums() {
        // 2x2 with ≤ 3 outcomes: S(4,1)+S(4,2)+S(4,3) = 1 + 7 + 6.
        assert_eq!(forms_of_shape(2, 2, 3).len(), 14);
        // 3x3 with ≤ 3 outcomes: 1 + 255 + 3025.
        assert_eq!(forms_of_shape(3, 3, 3).len(), 3281);
        assert!(forms_of_shape(3, 3, 3).iter().all(|g| *g == g.canonical_relabeling()));
    }

    #[test]
    fn random_forms_are_surjective() {
        let mut rng = crate::rng::stream(7, 0);
        for _ in 0..50 {
            let g = random_form(&mut rng, 2, 3, 4);
            assert_eq!(g.num_outcomes(), 4);
        }
    }
}
