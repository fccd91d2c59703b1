use serde_json::Value;

use tightgames::cert::{self, Envelope};
use tightgames::forms::corpus;
use tightgames::rng::stream;
use tightgames::tightness::{is_tight, Method, Verdict, DEFAULT_BUDGET};
use tightgames::vform::search_ne_free_mean_payoff;

fn g7_witness() -> Envelope {
    let g = corpus::g7();
    match is_tight(&g, Method::J, DEFAULT_BUDGET).unwrap() {
        Verdict::NotTight(w) => cert::tightness_certificate(&g, &w),
        Verdict::Tight => panic!("g7 is not tight"),
    }
}

#[test]
fn g7_witness_verifies_from_text() {
    let env = g7_witness();
    let back = cert::parse_certificate(&env.to_json()).unwrap();
    assert_eq!(back.kind(), "tightness-witness");
    assert!(cert::verify(&back));
}

#[test]
fn flipped_entry_is_rejected() {
    let env = g7_witness();
    let mut v = serde_json::to_value(&env).unwrap();
    v["phi"][0] = Value::from(1 - v["phi"][0].as_u64().unwrap());
    let tampered: Envelope = serde_json::from_value(v).unwrap();
    assert!(!cert::verify(&tampered));
}

#[test]
fn forged_digest_does_not_rescue_a_wrong_witness() {
    let g = corpus::g7();
    let Verdict::NotTight(mut w) = is_tight(&g, Method::J, DEFAULT_BUDGET).unwrap() else {
        panic!("g7 is not tight")
    };
    // a fresh envelope over bad content has a matching digest
    w.phi.map[0] = 1 - w.phi.map[0];
    assert!(!cert::verify(&cert::tightness_certificate(&g, &w)));
}

#[test]
fn ne_free_certificate_replays() {
    let mut rng = stream(42, 9);
    let c = search_ne_free_mean_payoff(&mut rng, 3, 3, 20_000).unwrap().expect("a 3×3 arena has NE-free utilities");
    let env = cert::ne_free_certificate(&c);
    assert!(cert::verify(&cert::parse_certificate(&env.to_json()).unwrap()));
}

#[test]
fn garbage_is_an_error_not_a_panic() {
    assert!(cert::parse_certificate("{\"schema\": 1}").is_err());
    assert!(cert::parse_certificate("not json").is_err());
}
