use beads_web::{density_pairs, limit_triples, sample_pairs};

#[test]
fn sample_has_one_pair_per_particle() {
    let v = sample_pairs(4, 12, 9).unwrap();
    assert_eq!(v.len(), 2 * 48);
    assert_eq!(v, sample_pairs(4, 12, 9).unwrap());
    assert!(v.chunks(2).all(|c| (1.0..=15.0).contains(&c[0]) && c[1] > 0.0 && c[1] < 1.0));
}

#[test]
fn density_matches_closed_form() {
    let v = density_pairs(1, 2, 2, 10).unwrap();
    for c in v.chunks(2) {
        assert!((c[1] - 2.0 * c[0]).abs() < 1e-12);
    }
}

#[test]
fn limit_shape_pinches_at_the_ends() {
    let v = limit_triples(4, 12, 256).unwrap();
    assert_eq!(v.len(), 3 * 256);
    assert_eq!((v[1], v[2]), (0.25, 0.25));
    assert_eq!(v[765], 4.0);
    assert!((v[766] - 0.75).abs() < 1e-12 && (v[767] - 0.75).abs() < 1e-12);
}

#[test]
fn bad_spec_is_an_error() {
    assert!(sample_pairs(3, 1, 0).is_err());
}
