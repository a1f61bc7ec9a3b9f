//! The Mathieu group M11 on 11 points, embedded as two generators.

use crate::action::transitivity_of;
use crate::elements::ElementTable;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Generators of M11 as a permutation group on `{0..10}`.
pub const GENERATORS: [&str; 2] = ["(0,1,2,3,4,5,6,7,8,9,10)", "(2,6,10,7)(3,9,4,5)"];

pub const ORDER: u64 = 7920;

pub fn generators() -> Vec<Permutation> {
    GENERATORS
        .iter()
        .map(|s| Permutation::parse(s, 11).expect("embedded generator"))
        .collect()
}

pub fn m11() -> PermGroup {
    PermGroup::new(generators()).expect("embedded generators")
}

/// Outcome of the start-up checks on a candidate M11.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub order: u64,
    pub simple: bool,
    pub transitivity: usize,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.order == ORDER && self.simple && self.transitivity >= 4
    }
}

/// Order, simplicity (every non-trivial element has normal closure equal
/// to the group) and transitivity degree.
pub fn validate(group: &PermGroup) -> Result<Validation> {
    let order = group.order_u64();
    let table = ElementTable::new(group)?;
    let simple = table
        .conjugacy_classes()
        .iter()
        .filter(|c| c[0] != 0)
        .all(|c| group.normal_closure(&[table.element(c[0]).clone()]).order() == group.order());
    let transitivity = transitivity_of(group);
    Ok(Validation {
        order,
        simple,
        transitivity,
    })
}

/// Loads and validates the embedded generators.
pub fn load_validated() -> Result<PermGroup> {
    let g = m11();
    let v = validate(&g)?;
    if !v.passed() {
        return Err(Error::Invalid(format!(
            "embedded M11 failed validation: {v:?}"
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_group_validates() {
        let v = validate(&m11()).unwrap();
        assert_eq!(
            v,
            Validation {
                order: 7920,
                simple: true,
                transitivity: 4
            }
        );
    }

    #[test]
    fn non_simple_group_detected() {
        // S5 on 5 points: A5 is a proper normal closure.
        let s5 = PermGroup::new(vec![
            Permutation::parse("(0,1,2,3,4)", 5).unwrap(),
            Permutation::parse("(0,1)", 5).unwrap(),
        ])
        .unwrap();
        let v = validate(&s5).unwrap();
        assert!(!v.simple);
        assert!(!v.passed());
    }
}
