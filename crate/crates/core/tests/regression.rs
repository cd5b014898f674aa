//! Frozen outputs of the seeded generators. A change here means every
//! stored witness and report has shifted.

use lawvar::rng::test_point;
use lawvar::{random_variable, trial_rng, Law, SampleSpace};

fn space() -> SampleSpace {
    SampleSpace::new(4).unwrap()
}

#[test]
fn uniform_draws_are_frozen() {
    let x = random_variable(42, space(), Law::Uniform { a: -1.0, b: 1.0 }).unwrap();
    assert_eq!(
        x.values(),
        [
            0.3637923846133426,
            0.900550815344968,
            -0.1449671942869606,
            0.25472104239468063
        ]
    );
}

#[test]
fn normal_draws_are_frozen() {
    let x = random_variable(
        42,
        space(),
        Law::Normal {
            mu: 0.0,
            sigma: 1.0,
        },
    )
    .unwrap();
    assert_eq!(
        x.values(),
        [
            0.47798123835102174,
            1.3340706102318078,
            -0.21086668327103028,
            0.4763469238088213
        ]
    );
}

#[test]
fn integer_draws_are_frozen() {
    let x = random_variable(42, space(), Law::Integer { a: -3, b: 3 }).unwrap();
    assert_eq!(x.values(), [1.0, 3.0, -1.0, 1.0]);
}

#[test]
fn trial_streams_are_frozen() {
    let x = test_point(&mut trial_rng(7, 3), 5);
    assert_eq!(
        x.values(),
        [
            -0.6115950112109863,
            -0.31498312707408394,
            -0.8931940931280065,
            0.6296320537134773,
            2.08749785292778
        ]
    );
}

#[test]
fn same_seed_same_variable() {
    let law = Law::Normal {
        mu: 1.0,
        sigma: 2.0,
    };
    assert_eq!(
        random_variable(9, space(), law).unwrap(),
        random_variable(9, space(), law).unwrap()
    );
    assert_ne!(
        random_variable(9, space(), law).unwrap(),
        random_variable(10, space(), law).unwrap()
    );
}

#[test]
fn bad_descriptors_are_rejected() {
    assert!(random_variable(0, space(), Law::Uniform { a: 1.0, b: 0.0 }).is_err());
    assert!(random_variable(
        0,
        space(),
        Law::Normal {
            mu: 0.0,
            sigma: -1.0
        }
    )
    .is_err());
    assert!(random_variable(0, space(), Law::Integer { a: 2, b: 1 }).is_err());
}
