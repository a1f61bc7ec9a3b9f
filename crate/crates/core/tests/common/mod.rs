#![allow(dead_code)]

use std::sync::OnceLock;

use atlas_core::action::{coset_action, GroupAction, DEFAULT_INDEX_CAP};
use atlas_core::{enumerate_subgroup_classes, m11, AtlasBudget, PermGroup, SubgroupClass};

pub struct Fixture {
    pub group: PermGroup,
    pub classes: Vec<SubgroupClass>,
    pub actions: Vec<GroupAction>,
}

/// M11, its 39 subgroup classes and the coset action on each.
pub fn m11_fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let group = m11::m11();
        let classes = enumerate_subgroup_classes(&group, AtlasBudget::default()).unwrap();
        let actions = classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut a = coset_action(&group, &c.representative, DEFAULT_INDEX_CAP).unwrap();
                a.class_id = Some(i);
                a
            })
            .collect();
        Fixture {
            group,
            classes,
            actions,
        }
    })
}

impl Fixture {
    pub fn of_index(&self, n: u64) -> Vec<&GroupAction> {
        self.classes
            .iter()
            .zip(&self.actions)
            .filter(|(c, _)| c.index == n)
            .map(|(_, a)| a)
            .collect()
    }
}
