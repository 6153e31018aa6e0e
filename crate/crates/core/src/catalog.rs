//! The shipped catalog of Galois extensions and helpers to instantiate them
//! at a given level.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{compute_automorphisms, GaloisGroup};
use crate::lfc::working_precision;
use crate::local_field::{FieldDescriptor, LocalField};

const SHIPPED: &str = include_str!("../data/catalog.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    /// isomorphism type of `Gal(L/Q_p)`
    pub group: String,
    pub field: FieldDescriptor,
}

impl CatalogEntry {
    pub fn e(&self) -> usize {
        self.field.eis_poly.len().saturating_sub(1)
    }

    pub fn degree(&self) -> usize {
        self.e() * self.field.f
    }

    pub fn is_ramified(&self) -> bool {
        self.e() > 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn from_json(s: &str) -> Result<Catalog> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("catalog: {e}")))
    }

    /// All Galois extensions of `Q_2` and `Q_3` of degree at most 4, and an
    /// `S_3` extension of `Q_3`.
    pub fn shipped() -> Catalog {
        Catalog::from_json(SHIPPED).expect("shipped catalog parses")
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Entries over `Q_p` for `p` in `primes` (all if empty) of degree at most `max_degree`.
    pub fn filter(&self, primes: &[u64], max_degree: Option<usize>) -> Catalog {
        let entries = self
            .entries
            .iter()
            .filter(|e| primes.is_empty() || primes.contains(&e.field.p))
            .filter(|e| max_degree.is_none_or(|m| e.degree() <= m))
            .cloned()
            .collect();
        Catalog { entries }
    }
}

/// The field of `desc` at a working precision adequate for level `k`.
pub fn field_for_level(desc: &FieldDescriptor, k: i64) -> Result<Arc<LocalField>> {
    if desc.eis_poly.len() < 2 {
        return Err(Error::NotEisenstein("polynomial has degree zero".into()));
    }
    let e = desc.eis_poly.len() - 1;
    LocalField::from_descriptor(desc, working_precision(k, e))
}

/// `Gal(L/Q_p)` for the field of `desc` at level `k`.
pub fn group_for_level(desc: &FieldDescriptor, k: i64) -> Result<GaloisGroup> {
    compute_automorphisms(&field_for_level(desc, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_catalog_is_consistent() {
        let c = Catalog::shipped();
        let mut names: Vec<&str> = c.entries.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), c.entries.len());
        for e in &c.entries {
            let g = group_for_level(&e.field, 4).unwrap();
            assert_eq!(g.order(), e.degree(), "{}", e.name);
            let cyclic = (0..g.order()).any(|a| g.element_order(a) == g.order());
            assert_eq!(cyclic, e.group.starts_with('C'), "{}", e.name);
        }
    }

    #[test]
    fn filter_by_prime_and_degree() {
        let c = Catalog::shipped();
        let q3 = c.filter(&[3], Some(2));
        assert!(!q3.entries.is_empty());
        assert!(q3.entries.iter().all(|e| e.field.p == 3 && e.degree() <= 2));
        assert!(Catalog::from_json(r#"{"entries":[]}"#).unwrap().entries.is_empty());
    }
}
