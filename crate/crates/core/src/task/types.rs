use std::collections::HashMap;

use crate::pddl::{PddlError, TypeDecl, ROOT_TYPE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub u32);

/// Forest of type names rooted at `object`.
///
/// A parent named in a declaration but never declared itself is treated as a
/// direct child of `object`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeHierarchy {
    names: Vec<String>,
    parents: Vec<Option<TypeId>>,
    index: HashMap<String, TypeId>,
}

impl TypeHierarchy {
    pub const ROOT: TypeId = TypeId(0);

    pub fn from_decls(decls: &[TypeDecl]) -> Result<Self, PddlError> {
        let mut h = TypeHierarchy {
            names: vec![ROOT_TYPE.to_string()],
            parents: vec![None],
            index: HashMap::from([(ROOT_TYPE.to_string(), Self::ROOT)]),
        };
        for d in decls {
            if d.name == ROOT_TYPE {
                continue;
            }
            if h.index.contains_key(&d.name) {
                return Err(PddlError::Duplicate { what: "type", name: d.name.clone() });
            }
            h.intern(&d.name);
        }
        for d in decls {
            if d.name == ROOT_TYPE {
                continue;
            }
            let child = h.index[&d.name];
            let parent = h.intern(&d.parent);
            h.parents[child.0 as usize] = Some(parent);
        }
        for i in 0..h.names.len() {
            let start = TypeId(i as u32);
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = h.parents[cur.0 as usize] {
                cur = p;
                steps += 1;
                if cur == start || steps > h.names.len() {
                    return Err(PddlError::Syntax {
                        line: 0,
                        column: 0,
                        message: format!("cyclic type hierarchy involving '{}'", h.names[i]),
                    });
                }
            }
        }
        Ok(h)
    }

    fn intern(&mut self, name: &str) -> TypeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = TypeId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.parents.push(Some(Self::ROOT));
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<TypeId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: TypeId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn parent(&self, id: TypeId) -> Option<TypeId> {
        self.parents[id.0 as usize]
    }

    /// True iff `sub` reaches `sup` by parent edges (reflexive).
    pub fn is_subtype(&self, sub: TypeId, sup: TypeId) -> bool {
        let mut cur = Some(sub);
        while let Some(t) = cur {
            if t == sup {
                return true;
            }
            cur = self.parents[t.0 as usize];
        }
        false
    }

    /// Name-based variant; unknown names are never subtypes.
    pub fn is_subtype_name(&self, sub: &str, sup: &str) -> bool {
        match (self.id(sub), self.id(sup)) {
            (Some(a), Some(b)) => self.is_subtype(a, b),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decl(name: &str, parent: &str) -> TypeDecl {
        TypeDecl { name: name.into(), parent: parent.into() }
    }

    #[test]
    fn subtype_relation() {
        let h =
            TypeHierarchy::from_decls(&[decl("truck", "vehicle"), decl("vehicle", "object"), decl("city", "object")])
                .unwrap();
        assert!(h.is_subtype_name("truck", "truck"));
        assert!(h.is_subtype_name("truck", "object"));
        assert!(h.is_subtype_name("city", "object"));
        assert!(h.is_subtype_name("truck", "vehicle"));
        assert!(!h.is_subtype_name("vehicle", "truck"));
        assert!(!h.is_subtype_name("city", "vehicle"));
    }

    #[test]
    fn implicit_parent_hangs_off_root() {
        let h = TypeHierarchy::from_decls(&[decl("truck", "vehicle")]).unwrap();
        assert!(h.is_subtype_name("vehicle", "object"));
    }

    #[test]
    fn rejects_cycles_and_duplicates() {
        assert!(TypeHierarchy::from_decls(&[decl("a", "b"), decl("b", "a")]).is_err());
        assert!(TypeHierarchy::from_decls(&[decl("a", "object"), decl("a", "object")]).is_err());
    }
}
