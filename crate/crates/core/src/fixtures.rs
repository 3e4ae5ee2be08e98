//! Small example pairs shared by tests across the workspace.

use crate::quiver::{validate_locally_gentle, LocallyGentlePair, Quiver};

/// Six vertices, an oriented 3-cycle `alpha, beta, nu` with a tail of four
/// more arrows, and the relation 4-cycle `beta*delta, delta*epsilon,
/// epsilon*zeta, zeta*beta`. Not gentle: the 3-cycle composes admissibly.
pub fn running_example() -> LocallyGentlePair {
    let q = Quiver::new(
        vec!["1", "2", "3", "4", "5", "6"],
        vec![
            ("alpha", "1", "2"),
            ("beta", "2", "3"),
            ("nu", "3", "1"),
            ("delta", "5", "2"),
            ("epsilon", "4", "5"),
            ("zeta", "3", "4"),
            ("eta", "5", "6"),
        ],
    )
    .unwrap();
    validate_locally_gentle(
        q,
        &[
            ("beta".into(), "delta".into()),
            ("delta".into(), "epsilon".into()),
            ("epsilon".into(), "zeta".into()),
            ("zeta".into(), "beta".into()),
        ],
    )
    .unwrap()
}

/// Line `1 -alpha-> 2 -nu-> 3` with a loop `beta` at 2, with the given
/// relations. `beta*beta, nu*alpha` gives a gentle pair; `beta*alpha,
/// nu*beta` gives one that is only locally gentle.
pub fn ex24(relations: &[(&str, &str)]) -> LocallyGentlePair {
    let q = Quiver::new(
        vec!["1", "2", "3"],
        vec![("alpha", "1", "2"), ("beta", "2", "2"), ("nu", "2", "3")],
    )
    .unwrap();
    let rel: Vec<(String, String)> = relations
        .iter()
        .map(|(b, a)| (b.to_string(), a.to_string()))
        .collect();
    validate_locally_gentle(q, &rel).unwrap()
}

/// The gentle variant of [`ex24`].
pub fn ex24_gentle() -> LocallyGentlePair {
    ex24(&[("beta", "beta"), ("nu", "alpha")])
}

/// The non-gentle variant of [`ex24`].
pub fn ex24_locally_gentle() -> LocallyGentlePair {
    ex24(&[("beta", "alpha"), ("nu", "beta")])
}
