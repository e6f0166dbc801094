use rtmaps::mzvnum::PrecisionContext;
use rtmaps::relations::{generate, RelationRecord, VerifyMode};
use rtmaps::words::Poly;

#[test]
fn records_round_trip_through_json() {
    let recs = generate(2, 4, VerifyMode::Both, PrecisionContext::default(), 1e-25).unwrap();
    assert_eq!(recs.len(), 3 * 7);
    for r in &recs {
        let line = serde_json::to_string(r).unwrap();
        assert!(!line.contains('\n'));
        let back: RelationRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(&back, r);
        assert!(!r.failed(), "{line}");
    }
}

#[test]
fn index_combination_matches_image() {
    for r in generate(3, 5, VerifyMode::None, PrecisionContext::default(), 1e-25).unwrap() {
        let image = Poly::from_pairs(&r.image_poly).unwrap();
        let rebuilt: Vec<(String, String)> = r
            .index_combination
            .iter()
            .map(|(c, i)| (c.clone(), i.to_word().to_string()))
            .collect();
        assert_eq!(Poly::from_pairs(&rebuilt).unwrap(), image);
        assert!(image.in_x_h_y());
    }
}

#[test]
fn rationals_are_strings() {
    let recs = generate(1, 3, VerifyMode::Exact, PrecisionContext::default(), 1e-25).unwrap();
    let v: serde_json::Value = serde_json::to_value(&recs[1]).unwrap();
    for pair in v["image_poly"].as_array().unwrap() {
        assert!(pair[0].as_str().unwrap().contains('/'));
    }
    assert_eq!(v["source_index"], "3");
}
