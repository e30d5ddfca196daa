use super::*;
use crate::editdist::normalize;
use proptest::prelude::*;

fn forms(cell: &str) -> Cell {
    if cell == "?" {
        None
    } else {
        Some(cell.split('|').map(|f| normalize(f).unwrap()).collect())
    }
}

/// Rows of `(language, cells)` with "?" for missing and "|" between synonyms.
fn dataset(meanings: &[&str], rows: &[(&str, &[&str])]) -> FamilyDataset {
    FamilyDataset::new(
        rows.iter().map(|(l, _)| l.to_string()).collect(),
        meanings.iter().map(|m| m.to_string()).collect(),
        rows.iter()
            .map(|(_, cells)| cells.iter().map(|c| forms(c)).collect())
            .collect(),
    )
    .unwrap()
}

fn words(cell: &str) -> Vec<Word> {
    forms(cell).unwrap()
}

#[test]
fn cell_distance_examples() {
    use SynonymPolicy::*;
    assert_eq!(cell_distance(&words("sun"), &words("sun"), First), 0.0);
    assert_eq!(cell_distance(&words("hund|dog"), &words("dog"), Min), 0.0);
    // levenshtein("hund", "dog") = 4 by exhaustive recursion (editdist tests)
    assert_eq!(cell_distance(&words("hund|dog"), &words("dog"), First), 1.0);
    assert_eq!(cell_distance(&words("hand|dog"), &words("land"), First), 0.25);
}

#[test]
fn identical_lists_give_zero_matrix() {
    let ds = dataset(
        &["sun", "cat"],
        &[("a", &["sol", "gato"]), ("b", &["sol", "gato"]), ("c", &["sol", "gato"])],
    );
    let d = full_distance(&ds, SynonymPolicy::First).unwrap();
    assert!(d.entries().iter().all(|&x| x == 0.0));
    assert_eq!(d.support(0, 2), 2);
}

#[test]
fn two_meaning_hand_example() {
    let ds = dataset(&["cat", "sun"], &[("A", &["cat", "sun"]), ("B", &["bat", "sun"])]);
    let d = full_distance(&ds, SynonymPolicy::First).unwrap();
    assert!((d.get(0, 1) - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(d.get(1, 0), d.get(0, 1));
    assert_eq!(d.get(1, 1), 0.0);
}

#[test]
fn missing_cell_reduces_support() {
    let ds = dataset(
        &["cat", "sun", "dog"],
        &[("A", &["cat", "sun", "dog"]), ("B", &["bat", "?", "dig"])],
    );
    let d = full_distance(&ds, SynonymPolicy::First).unwrap();
    // (1/3 + 1/3) / 2 over the two shared meanings
    assert!((d.get(0, 1) - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(d.support(0, 1), 2);
}

#[test]
fn no_shared_meaning_is_an_error() {
    let ds = dataset(&["x", "y"], &[("A", &["aa", "?"]), ("B", &["?", "bb"])]);
    assert_eq!(
        full_distance(&ds, SynonymPolicy::First),
        Err(LexError::NoSharedMeanings("A".into(), "B".into()))
    );
    assert_eq!(
        language_distance(&ds, &[], SynonymPolicy::First),
        Err(LexError::EmptySelection)
    );
}

#[test]
fn stability_hand_examples() {
    let ds = dataset(
        &["one", "two"],
        &[("a", &["cat", "un"]), ("b", &["cat", "un"]), ("c", &["bat", "un"])],
    );
    let t = stability(&ds, SynonymPolicy::First).unwrap();
    let one = t.get("one").unwrap();
    assert!((one.stability - 7.0 / 9.0).abs() < 1e-12);
    assert_eq!(one.pairs, 3);
    assert_eq!(t.get("two").unwrap().stability, 1.0);
    assert_eq!(rank_meanings(&t), vec!["two", "one"]);
}

#[test]
fn stability_needs_two_languages_per_meaning() {
    let ds = dataset(&["x", "y"], &[("a", &["aa", "bb"]), ("b", &["ab", "?"])]);
    assert_eq!(
        stability(&ds, SynonymPolicy::First),
        Err(LexError::InsufficientCoverage("y".into()))
    );
}

#[test]
fn rank_examples() {
    let t = StabilityTable::from_values(vec![("b".into(), 0.5, 1), ("a".into(), 0.9, 1)]);
    assert_eq!(rank_meanings(&t), vec!["a", "b"]);
    let t = StabilityTable::from_values(vec![("b".into(), 0.5, 1), ("a".into(), 0.5, 1)]);
    assert_eq!(rank_meanings(&t), vec!["a", "b"]);
    assert_eq!(t.get("a").unwrap().rank, 1);
}

fn sample_family() -> FamilyDataset {
    dataset(
        &["i", "two", "water", "dog"],
        &[
            ("en", &["i", "two", "water", "dog"]),
            ("de", &["ich", "zwei", "wasser", "hund"]),
            ("nl", &["ik", "twee", "water", "hond"]),
            ("sv", &["jag", "tva", "vatten", "hund|vovve"]),
            ("is", &["eg", "tveir", "vatn", "?"]),
        ],
    )
}

#[test]
fn full_truncation_is_bit_identical() {
    let ds = sample_family();
    let t = stability(&ds, SynonymPolicy::First).unwrap();
    let full = full_distance(&ds, SynonymPolicy::First).unwrap();
    let dm = truncated_distance(&ds, &t, ds.n_meanings(), SynonymPolicy::First).unwrap();
    assert_eq!(full, dm);
    assert!(truncated_distance(&ds, &t, 0, SynonymPolicy::First).is_err());
    assert!(truncated_distance(&ds, &t, 5, SynonymPolicy::First).is_err());
}

#[test]
fn single_meaning_truncation() {
    let ds = dataset(
        &["fast", "slow"],
        &[("a", &["xyz", "sun"]), ("b", &["pq", "sun"]), ("c", &["k", "son"])],
    );
    let t = stability(&ds, SynonymPolicy::First).unwrap();
    assert_eq!(rank_meanings(&t)[0], "slow");
    let d1 = truncated_distance(&ds, &t, 1, SynonymPolicy::First).unwrap();
    assert_eq!(d1.get(0, 1), 0.0);
    assert!((d1.get(0, 2) - 1.0 / 3.0).abs() < 1e-15);
    assert!((d1.get(1, 2) - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(d1.support(0, 2), 1);
}

fn matrix(values: &[f64]) -> DistanceMatrix {
    // 3 labels -> 3 entries
    DistanceMatrix::new(vec!["a".into(), "b".into(), "c".into()], values.to_vec(), None).unwrap()
}

#[test]
fn correlation_examples() {
    let m = matrix(&[0.0, 0.1, 0.2]);
    assert_eq!(correlation(&m, &m).unwrap(), 1.0);
    let doubled = matrix(&[0.0, 0.2, 0.4]);
    assert!((correlation(&m, &doubled).unwrap() - 1.0).abs() < 1e-15);
    let reversed = matrix(&[0.2, 0.1, 0.0]);
    assert!((correlation(&m, &reversed).unwrap() + 1.0).abs() < 1e-15);
    let flat = matrix(&[0.3, 0.3, 0.3]);
    assert_eq!(correlation(&m, &flat), Err(LexError::DegenerateVariance));
}

#[test]
fn correlation_aligns_labels() {
    let m = matrix(&[0.1, 0.5, 0.2]);
    // same matrix with labels listed as c, a, b
    let permuted = DistanceMatrix::new(
        vec!["c".into(), "a".into(), "b".into()],
        vec![0.5, 0.2, 0.1],
        None,
    )
    .unwrap();
    assert_eq!(correlation(&m, &permuted).unwrap(), 1.0);
    let other = DistanceMatrix::new(vec!["a".into(), "b".into(), "z".into()], vec![0.1, 0.5, 0.2], None).unwrap();
    assert_eq!(correlation(&m, &other), Err(LexError::LabelMismatch));
}

#[test]
fn correlation_curve_ends_at_one() {
    let ds = sample_family();
    let t = stability(&ds, SynonymPolicy::First).unwrap();
    let curve = correlation_curve(&ds, &t, &[4], SynonymPolicy::First).unwrap();
    assert_eq!(curve, vec![(4, 1.0)]);
    let curve = correlation_curve(&ds, &t, &[2, 3, 4], SynonymPolicy::Min).unwrap();
    assert_eq!(curve.last(), Some(&(4, 1.0)));
}

#[test]
fn default_grid_shape() {
    assert_eq!(default_grid(35, 10), vec![10, 20, 30, 35]);
    assert_eq!(default_grid(30, 10), vec![10, 20, 30]);
    assert_eq!(default_grid(4, 10), vec![4]);
}

#[test]
fn duplicate_language_keeps_original_distances() {
    let ds = sample_family();
    let d = full_distance(&ds, SynonymPolicy::First).unwrap();
    let mut langs = ds.languages().to_vec();
    langs.push("en2".into());
    let mut rows: Vec<Vec<Cell>> = (0..ds.n_languages()).map(|l| ds.row(l).to_vec()).collect();
    rows.push(ds.row(0).to_vec());
    let dup = FamilyDataset::new(langs, ds.meanings().to_vec(), rows).unwrap();
    let dd = full_distance(&dup, SynonymPolicy::First).unwrap();
    for (i, j) in pairs(ds.n_languages()) {
        assert_eq!(d.get(i, j), dd.get(i, j));
    }
    assert_eq!(dd.get(0, 5), 0.0);
}

fn random_dataset() -> impl Strategy<Value = FamilyDataset> {
    (2usize..6, 1usize..5).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::collection::vec("[abc]{1,4}", m), n).prop_map(move |table| {
            FamilyDataset::new(
                (0..n).map(|i| format!("L{i}")).collect(),
                (0..m).map(|i| format!("m{i}")).collect(),
                table
                    .into_iter()
                    .map(|row| row.into_iter().map(|w| Some(vec![normalize(&w).unwrap()])).collect())
                    .collect(),
            )
            .unwrap()
        })
    })
}

fn reversed_languages(ds: &FamilyDataset) -> FamilyDataset {
    let order: Vec<usize> = (0..ds.n_languages()).rev().collect();
    FamilyDataset::new(
        order.iter().map(|&l| ds.languages()[l].clone()).collect(),
        ds.meanings().to_vec(),
        order.iter().map(|&l| ds.row(l).to_vec()).collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn matrix_entries_in_unit_interval(ds in random_dataset()) {
        let d = full_distance(&ds, SynonymPolicy::First).unwrap();
        for &x in d.entries() {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        let t = stability(&ds, SynonymPolicy::Min).unwrap();
        for r in t.rows() {
            prop_assert!((0.0..=1.0).contains(&r.stability));
        }
        let mut ranks: Vec<usize> = t.rows().iter().map(|r| r.rank).collect();
        ranks.sort_unstable();
        prop_assert_eq!(ranks, (1..=ds.n_meanings()).collect::<Vec<_>>());
    }

    #[test]
    fn language_order_does_not_matter(ds in random_dataset()) {
        let rev = reversed_languages(&ds);
        let (d, dr) = (
            full_distance(&ds, SynonymPolicy::First).unwrap(),
            full_distance(&rev, SynonymPolicy::First).unwrap(),
        );
        let n = ds.n_languages();
        for (i, j) in pairs(n) {
            prop_assert_eq!(d.get(i, j), dr.get(n - 1 - i, n - 1 - j));
        }
        let (t, tr) = (
            stability(&ds, SynonymPolicy::First).unwrap(),
            stability(&rev, SynonymPolicy::First).unwrap(),
        );
        prop_assert_eq!(t, tr);
    }

    #[test]
    fn correlation_symmetric_and_affine_invariant(
        xs in prop::collection::vec(0.0f64..1.0, 6),
        ys in prop::collection::vec(0.0f64..1.0, 6),
        scale in 0.1f64..2.0,
        shift in 0.0f64..0.3,
    ) {
        let labels: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let a = DistanceMatrix::new(labels.clone(), xs.clone(), None).unwrap();
        let b = DistanceMatrix::new(labels.clone(), ys, None).unwrap();
        let moved: Vec<f64> = xs.iter().map(|x| (x * scale + shift) / 3.0).collect();
        let a2 = DistanceMatrix::new(labels, moved, None).unwrap();
        if let (Ok(ab), Ok(ba)) = (correlation(&a, &b), correlation(&b, &a)) {
            prop_assert_eq!(ab, ba);
            let a2b = correlation(&a2, &b).unwrap();
            prop_assert!((ab - a2b).abs() < 1e-9);
        }
    }
}
