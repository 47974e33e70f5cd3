use std::collections::HashMap;

use crate::grounder::GroundTask;
use crate::task::{GroundAtom, State};

/// Dense bitset over atom ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Bits(Box<[u64]>);

impl Bits {
    pub fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)].into_boxed_slice())
    }

    #[inline]
    pub fn get(&self, i: u32) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: u32) {
        self.0[(i / 64) as usize] |= 1 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: u32) {
        self.0[(i / 64) as usize] &= !(1 << (i % 64));
    }

    pub fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros();
                bits &= bits - 1;
                Some(w as u32 * 64 + tz)
            })
        })
    }
}

pub(crate) struct CompiledAction {
    pub pre: Vec<u32>,
    pub add: Vec<u32>,
    pub del: Vec<u32>,
    /// Cost used inside the heuristic; zero-cost actions count as 1 there so
    /// that h = 0 exactly at goal states.
    pub h_cost: f64,
}

/// Ground task over dense atom ids, shared by the heuristic and the search.
pub(crate) struct CompiledTask {
    pub num_atoms: usize,
    pub actions: Vec<CompiledAction>,
    pub init: Bits,
    /// `None` when some goal atom is not relaxed-reachable from s0.
    pub goal: Option<Vec<u32>>,
    /// Actions indexed by their smallest precondition atom.
    pub by_first_pre: Vec<Vec<u32>>,
    pub no_pre: Vec<u32>,
    /// For each atom, the actions that have it as a precondition.
    pub pre_of: Vec<Vec<u32>>,
    index: HashMap<GroundAtom, u32>,
}

impl CompiledTask {
    pub fn new(gt: &GroundTask) -> Self {
        let index: HashMap<GroundAtom, u32> = gt.atoms.iter().enumerate().map(|(i, a)| (a.clone(), i as u32)).collect();
        let ids = |atoms: &[GroundAtom]| -> Vec<u32> {
            let mut v: Vec<u32> = atoms.iter().filter_map(|a| index.get(a).copied()).collect();
            v.sort_unstable();
            v
        };
        let n = gt.atoms.len();
        let mut by_first_pre = vec![Vec::new(); n];
        let mut pre_of = vec![Vec::new(); n];
        let mut no_pre = Vec::new();
        let mut actions = Vec::with_capacity(gt.actions.len());
        for (i, a) in gt.actions.iter().enumerate() {
            let pre = ids(&a.pre);
            debug_assert_eq!(pre.len(), a.pre.len(), "preconditions of reachable actions are reachable");
            match pre.first() {
                Some(&p) => by_first_pre[p as usize].push(i as u32),
                None => no_pre.push(i as u32),
            }
            for &p in &pre {
                pre_of[p as usize].push(i as u32);
            }
            let cost = a.cost.to_f64();
            actions.push(CompiledAction {
                pre,
                add: ids(&a.add),
                // deleted atoms that are never reachable can never be true
                del: ids(&a.del),
                h_cost: if cost > 0.0 { cost } else { 1.0 },
            });
        }
        let mut init = Bits::empty(n);
        for a in gt.init.iter() {
            if let Some(&i) = index.get(a) {
                init.set(i);
            }
        }
        let goal = gt.goal.iter().map(|g| index.get(g).copied()).collect::<Option<Vec<u32>>>();
        CompiledTask { num_atoms: n, actions, init, goal, by_first_pre, no_pre, pre_of, index }
    }

    pub fn encode(&self, state: &State) -> Bits {
        let mut b = Bits::empty(self.num_atoms);
        for a in state.iter() {
            if let Some(&i) = self.index.get(a) {
                b.set(i);
            }
        }
        b
    }

    pub fn is_goal(&self, s: &Bits) -> bool {
        self.goal.as_ref().is_some_and(|g| g.iter().all(|&i| s.get(i)))
    }

    /// Applicable action ids in ascending order.
    pub fn applicable(&self, s: &Bits, out: &mut Vec<u32>) {
        out.clear();
        out.extend_from_slice(&self.no_pre);
        for atom in s.ones() {
            for &a in &self.by_first_pre[atom as usize] {
                if self.actions[a as usize].pre.iter().all(|&p| s.get(p)) {
                    out.push(a);
                }
            }
        }
        out.sort_unstable();
    }

    pub fn successor(&self, s: &Bits, action: u32) -> Bits {
        let a = &self.actions[action as usize];
        let mut next = s.clone();
        for &d in &a.del {
            next.clear(d);
        }
        for &p in &a.add {
            next.set(p);
        }
        next
    }
}
