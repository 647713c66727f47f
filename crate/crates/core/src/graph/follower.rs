use crate::error::{Error, Result};
use crate::ids::UserId;
use crate::ingest::FollowEdgeList;

/// Seed users' friend lists in CSR form. Indegrees count only
/// seed-sourced edges, the only ones observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FollowerGraph {
    seeds: Vec<UserId>,
    offsets: Vec<usize>,
    friends: Vec<UserId>,
    indegree: Vec<u32>,
}

impl FollowerGraph {
    /// `seeds` must be ascending and deduplicated; `n_users` sizes the
    /// indegree table.
    pub fn build(edges: &FollowEdgeList, seeds: &[UserId], n_users: usize) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::Invalid("empty seed set".into()));
        }
        debug_assert!(seeds.windows(2).all(|w| w[0] < w[1]));
        let all = edges.edges();
        let n_users = n_users.max(all.iter().map(|e| e.0.index().max(e.1.index()) + 1).max().unwrap_or(0));
        let mut offsets = Vec::with_capacity(seeds.len() + 1);
        let mut friends = Vec::new();
        let mut indegree = vec![0u32; n_users];
        offsets.push(0);
        for &s in seeds {
            let lo = all.partition_point(|e| e.0 < s);
            let hi = all.partition_point(|e| e.0 <= s);
            for &(_, f) in &all[lo..hi] {
                friends.push(f);
                indegree[f.index()] += 1;
            }
            offsets.push(friends.len());
        }
        Ok(FollowerGraph {
            seeds: seeds.to_vec(),
            offsets,
            friends,
            indegree,
        })
    }

    /// Reassembles a graph from its CSR parts (used by the cache reader).
    pub(crate) fn from_parts(seeds: Vec<UserId>, offsets: Vec<usize>, friends: Vec<UserId>, n_users: usize) -> Self {
        let mut indegree = vec![0u32; n_users];
        for f in &friends {
            indegree[f.index()] += 1;
        }
        FollowerGraph {
            seeds,
            offsets,
            friends,
            indegree,
        }
    }

    pub(crate) fn parts(&self) -> (&[usize], &[UserId]) {
        (&self.offsets, &self.friends)
    }

    pub fn seeds(&self) -> &[UserId] {
        &self.seeds
    }

    pub fn seed_position(&self, u: UserId) -> Option<usize> {
        self.seeds.binary_search(&u).ok()
    }

    /// Ascending friend ids; `None` for non-seeds.
    pub fn friends(&self, u: UserId) -> Option<&[UserId]> {
        let i = self.seed_position(u)?;
        Some(&self.friends[self.offsets[i]..self.offsets[i + 1]])
    }

    pub fn follows(&self, u: UserId, v: UserId) -> bool {
        self.friends(u).is_some_and(|f| f.binary_search(&v).is_ok())
    }

    pub fn indegree(&self, u: UserId) -> u32 {
        self.indegree.get(u.index()).copied().unwrap_or(0)
    }

    pub fn indegrees(&self) -> &[u32] {
        &self.indegree
    }

    pub fn edge_count(&self) -> usize {
        self.friends.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::UserTable;
    use crate::ingest::parse_follow_edges_reader;

    #[test]
    fn restricts_to_seed_sources() {
        let mut users = UserTable::new();
        let edges = parse_follow_edges_reader("follower,friend\ns1,a\ns1,b\nx,a\n".as_bytes(), "e", &mut users).unwrap();
        let s1 = users.get("s1").unwrap();
        let g = FollowerGraph::build(&edges, &[s1], users.len()).unwrap();
        let names: Vec<&str> = g.friends(s1).unwrap().iter().map(|&f| users.name(f)).collect();
        assert_eq!(names, ["a", "b"]);
        assert_eq!(g.indegree(users.get("a").unwrap()), 1);
        assert_eq!(g.friends(users.get("x").unwrap()), None);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn friendless_seed_and_empty_seed_set() {
        let mut users = UserTable::new();
        let edges = parse_follow_edges_reader("follower,friend\na,b\n".as_bytes(), "e", &mut users).unwrap();
        let lonely = users.intern("lonely");
        let g = FollowerGraph::build(&edges, &[lonely], users.len()).unwrap();
        assert_eq!(g.friends(lonely), Some(&[][..]));
        assert!(FollowerGraph::build(&edges, &[], users.len()).is_err());
    }
}
