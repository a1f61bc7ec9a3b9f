//! Shared setup for the benchmarks.

use atlas_core::action::{coset_action, GroupAction, DEFAULT_INDEX_CAP};
use atlas_core::{enumerate_subgroup_classes, m11, AtlasBudget, PermGroup, SubgroupClass};

pub struct Setup {
    pub group: PermGroup,
    pub classes: Vec<SubgroupClass>,
}

impl Setup {
    pub fn m11() -> Self {
        let group = m11::m11();
        let classes =
            enumerate_subgroup_classes(&group, AtlasBudget::default()).expect("atlas of M11");
        Setup { group, classes }
    }

    pub fn action(&self, class: usize) -> GroupAction {
        let mut a = coset_action(
            &self.group,
            &self.classes[class].representative,
            DEFAULT_INDEX_CAP,
        )
        .expect("coset action");
        a.class_id = Some(class);
        a
    }

    /// First class whose coset action has degree `n`.
    pub fn class_of_index(&self, n: u64) -> usize {
        self.classes
            .iter()
            .position(|c| c.index == n)
            .expect("no class of that index")
    }

    pub fn all_actions(&self) -> Vec<GroupAction> {
        (0..self.classes.len()).map(|i| self.action(i)).collect()
    }
}
