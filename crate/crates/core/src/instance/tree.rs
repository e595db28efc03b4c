use super::{Instance, Time, Window};

/// One distinct job window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub window: Window,
    pub parent: Option<usize>,
    /// Ordered by interval start.
    pub children: Vec<usize>,
    pub depth: usize,
    /// Slots of the window not covered by any child, ascending.
    pub private_pool: Vec<Time>,
    /// Jobs whose window is exactly this node's window.
    pub jobs: Vec<usize>,
    /// Descendants (including self) occupy `index..subtree_end` in pre-order.
    subtree_end: usize,
}

impl TreeNode {
    /// `L(i)`, the number of private slots.
    pub fn pool_len(&self) -> u32 {
        self.private_pool.len() as u32
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Laminar family of job windows as a rooted tree, nodes indexed in pre-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaminarTree {
    nodes: Vec<TreeNode>,
    job_node: Vec<usize>,
    synthetic_root: bool,
}

impl LaminarTree {
    /// Builds one node per distinct window. A synthetic root `[0, T)` without
    /// jobs is added when the top-level windows do not already form a tree.
    pub fn build(inst: &Instance) -> Self {
        let mut windows: Vec<Window> = inst.jobs().iter().map(|j| j.window()).collect();
        windows.sort_by_key(|w| (w.start, std::cmp::Reverse(w.end)));
        windows.dedup();

        let top_level = count_top_level(&windows);
        let synthetic_root = top_level > 1;
        if synthetic_root {
            windows.insert(0, Window::new(0, inst.horizon()));
        }

        let mut nodes: Vec<TreeNode> = Vec::with_capacity(windows.len());
        let mut stack: Vec<usize> = Vec::new();
        for (idx, &window) in windows.iter().enumerate() {
            while let Some(&top) = stack.last() {
                if nodes[top].window.contains(&window) {
                    break;
                }
                stack.pop();
            }
            let parent = stack.last().copied();
            let depth = parent.map_or(0, |p| nodes[p].depth + 1);
            if let Some(p) = parent {
                nodes[p].children.push(idx);
            }
            nodes.push(TreeNode {
                window,
                parent,
                children: Vec::new(),
                depth,
                private_pool: Vec::new(),
                jobs: Vec::new(),
                subtree_end: idx + 1,
            });
            stack.push(idx);
        }

        for idx in (0..nodes.len()).rev() {
            let end = nodes[idx]
                .children
                .iter()
                .map(|&c| nodes[c].subtree_end)
                .max()
                .unwrap_or(idx + 1);
            nodes[idx].subtree_end = end;
            let node = &nodes[idx];
            let pool: Vec<Time> = node
                .window
                .slots()
                .filter(|&t| {
                    !node
                        .children
                        .iter()
                        .any(|&c| nodes[c].window.contains_slot(t))
                })
                .collect();
            nodes[idx].private_pool = pool;
        }

        let mut job_node = vec![0; inst.num_jobs()];
        for (j, job) in inst.jobs().iter().enumerate() {
            let w = job.window();
            let node = windows
                .binary_search_by_key(&(w.start, std::cmp::Reverse(w.end)), |x| {
                    (x.start, std::cmp::Reverse(x.end))
                })
                .expect("every job window is a node");
            job_node[j] = node;
            nodes[node].jobs.push(j);
        }

        LaminarTree {
            nodes,
            job_node,
            synthetic_root,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &TreeNode {
        &self.nodes[i]
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn has_synthetic_root(&self) -> bool {
        self.synthetic_root
    }

    /// `K(j)`: the node whose window equals the job's window.
    pub fn job_node(&self, job: usize) -> usize {
        self.job_node[job]
    }

    /// `L(i)`.
    pub fn pool_len(&self, i: usize) -> u32 {
        self.nodes[i].pool_len()
    }

    /// `Des(i)`, including `i`, in pre-order.
    pub fn descendants(&self, i: usize) -> std::ops::Range<usize> {
        i..self.nodes[i].subtree_end
    }

    /// `Des⁺(i)`: strict descendants.
    pub fn strict_descendants(&self, i: usize) -> std::ops::Range<usize> {
        i + 1..self.nodes[i].subtree_end
    }

    /// `Anc(i)`, including `i`, from `i` up to the root.
    pub fn ancestors(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut cur = i;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out
    }

    /// `Anc⁺(i)`: strict ancestors, nearest first.
    pub fn strict_ancestors(&self, i: usize) -> Vec<usize> {
        let mut out = self.ancestors(i);
        out.remove(0);
        out
    }

    /// Whether `a ∈ Anc(d)` (non-strict).
    pub fn is_ancestor(&self, a: usize, d: usize) -> bool {
        self.descendants(a).contains(&d)
    }

    /// `J(Anc(i))`: jobs that may run in node `i`.
    pub fn jobs_of_ancestors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .ancestors(i)
            .into_iter()
            .flat_map(|a| self.nodes[a].jobs.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// `J(Des(i))`: jobs whose window lies inside node `i`.
    pub fn jobs_of_descendants(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .descendants(i)
            .flat_map(|d| self.nodes[d].jobs.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_leaf())
    }

    /// Human-readable outline, one node per line, indented by depth.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            out.push_str(&format!(
                "{}node {} {} L={} jobs={}\n",
                "  ".repeat(node.depth),
                i,
                node.window,
                node.pool_len(),
                node.jobs.len()
            ));
        }
        out
    }
}

fn count_top_level(sorted: &[Window]) -> usize {
    let mut count = 0;
    let mut reach: Option<Time> = None;
    for w in sorted {
        match reach {
            Some(end) if w.start < end => {}
            _ => {
                count += 1;
                reach = Some(w.end);
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    fn tree(text: &str) -> LaminarTree {
        LaminarTree::build(&parse_instance(text).unwrap())
    }

    #[test]
    fn single_window() {
        let t = tree("g 1\njob a 0 3 1");
        assert_eq!(t.len(), 1);
        assert_eq!(t.pool_len(0), 3);
        assert!(!t.has_synthetic_root());
    }

    #[test]
    fn nested_windows() {
        let t = tree("g 2\njob a 0 4 2\njob b 0 2 1\njob c 2 4 1");
        assert_eq!(t.len(), 3);
        assert_eq!(t.node(0).window, Window::new(0, 4));
        assert_eq!(t.pool_len(0), 0);
        assert_eq!(t.node(0).children, vec![1, 2]);
        assert_eq!(t.node(1).window, Window::new(0, 2));
        assert_eq!(t.pool_len(1), 2);
        assert_eq!(t.pool_len(2), 2);
        assert_eq!(t.job_node(0), 0);
        assert_eq!(t.job_node(1), 1);
        assert_eq!(t.job_node(2), 2);
    }

    #[test]
    fn synthetic_root_for_forest() {
        let t = tree("g 1\njob a 1 2 1\njob b 3 5 1");
        assert!(t.has_synthetic_root());
        assert_eq!(t.node(0).window, Window::new(0, 5));
        assert!(t.node(0).jobs.is_empty());
        // [0,5) minus [1,2) and [3,5)
        assert_eq!(t.node(0).private_pool, vec![0, 2]);
        assert_eq!(t.job_node(0), 1);
        assert_eq!(t.job_node(1), 2);
    }

    #[test]
    fn shared_windows_share_a_node() {
        let t = tree("g 2\njob a 0 2 1\njob b 0 2 2\njob c 0 1 1");
        assert_eq!(t.len(), 2);
        assert_eq!(t.node(0).jobs, vec![0, 1]);
        assert_eq!(t.node(1).jobs, vec![2]);
        assert_eq!(t.node(0).private_pool, vec![1]);
        assert_eq!(t.jobs_of_ancestors(1), vec![0, 1, 2]);
        assert_eq!(t.jobs_of_descendants(0), vec![0, 1, 2]);
    }

    #[test]
    fn navigation() {
        let t = tree("g 1\njob a 0 8 1\njob b 0 4 1\njob c 0 2 1\njob d 4 8 1");
        assert_eq!(t.descendants(1), 1..3);
        assert_eq!(t.ancestors(2), vec![2, 1, 0]);
        assert_eq!(t.strict_ancestors(2), vec![1, 0]);
        assert!(t.is_ancestor(0, 3));
        assert!(!t.is_ancestor(1, 3));
        assert_eq!(t.leaves().collect::<Vec<_>>(), vec![2, 3]);
    }
}
