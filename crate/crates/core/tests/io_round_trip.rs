use proptest::prelude::*;
use rand::Rng;

use tightgames::enumerate::random_form;
use tightgames::error::Error;
use tightgames::forms::corpus;
use tightgames::graph::random_graph;
use tightgames::io;
use tightgames::rng::stream;
use tightgames::sp::{random_bipartite, random_costs};
use tightgames::vform::random_vform;
use tightgames::vplus::random_vplus_form;

#[test]
fn fixtures_parse_into_golden() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    for (i, want) in corpus::golden().into_iter().enumerate() {
        let text = std::fs::read_to_string(format!("{dir}/g{}.txt", i + 1)).unwrap();
        let parsed = io::parse_form(&text).unwrap();
        assert_eq!(parsed, want, "g{}", i + 1);
        assert_eq!(io::write_form(&parsed), text);
    }
}

#[test]
fn zero_denominator_is_a_parse_error() {
    let err = io::parse_rewards("1 3/0\n0 0\n", 2).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
}

#[test]
fn non_surjective_form_is_an_invariant_error() {
    let err = io::parse_form("2 2 3\n0 1\n1 0\n").unwrap_err();
    assert!(matches!(err, Error::InvalidForm(_)), "{err:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn forms(seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let o = rng.gen_range(1..=r * c);
        let g = random_form(&mut rng, r, c, o);
        let text = io::write_form(&g);
        prop_assert_eq!(io::parse_form(&text).unwrap(), g);
        prop_assert_eq!(io::write_form(&io::parse_form(&text).unwrap()), text);
    }

    #[test]
    fn graphs(seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let n = rng.gen_range(1..=8);
        let g = random_graph(&mut rng, n, 3, 0.3);
        let text = io::write_graph(&g);
        prop_assert_eq!(io::parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn vforms(seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let (r, c, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=4));
        let g = random_vform(&mut rng, r, c, m, 4, 5);
        let text = io::write_vform(&g);
        prop_assert_eq!(io::parse_vform(&text).unwrap(), g);
    }

    #[test]
    fn vplus_forms(seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let (r, c, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=4));
        let g = random_vplus_form(&mut rng, r, c, m, 0.2);
        let text = io::write_vplus(&g);
        prop_assert_eq!(io::parse_vplus(&text).unwrap(), g);
    }

    #[test]
    fn instances(seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let k = rng.gen_range(2..=6);
        let inst = random_bipartite(&mut rng, k, 0.5);
        let inst = inst.with_costs(random_costs(&mut rng, 2, inst.num_edges())).unwrap();
        let raw = inst.to_raw();
        let text = io::write_instance(&raw);
        prop_assert_eq!(io::parse_instance(&text).unwrap(), raw);
    }
}
