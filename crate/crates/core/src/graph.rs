//! Graph helpers over dense `usize` node ids.

use std::collections::VecDeque;

/// Strongly connected components (iterative Tarjan). Returns the component
/// index of every node; nodes not reachable from any root in `roots` get
/// `usize::MAX`.
pub fn scc_ids<F, I>(n: usize, roots: &[usize], mut succ: F) -> Vec<usize>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;

    for &root in roots {
        if index[root] != UNVISITED {
            continue;
        }
        // (node, successors, cursor)
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, succ(root).into_iter().collect(), 0));

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let ws = succ(w).into_iter().collect();
                    call.push((w, ws, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Nodes reachable from `root` lying on some cycle (a nonempty path back to
/// themselves).
pub fn on_cycle<F, I>(n: usize, root: usize, mut succ: F) -> Vec<bool>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let comp = scc_ids(n, &[root], &mut succ);
    let mut size = vec![0usize; n];
    for &c in &comp {
        if c != usize::MAX {
            size[c] += 1;
        }
    }
    (0..n)
        .map(|v| {
            comp[v] != usize::MAX
                && (size[comp[v]] > 1 || succ(v).into_iter().any(|w| w == v))
        })
        .collect()
}

/// Breadth-first order of nodes reachable from `root`.
pub fn reachable_bfs<F, I>(n: usize, root: usize, mut succ: F) -> Vec<usize>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_membership() {
        // 0 -> 1 -> 2 -> 1, 2 -> 3, 3 -> 3, 4 unreachable
        let adj: Vec<Vec<usize>> = vec![vec![1], vec![2], vec![1, 3], vec![3], vec![0]];
        let cyc = on_cycle(5, 0, |v| adj[v].clone());
        assert_eq!(cyc, vec![false, true, true, true, false]);
    }

    #[test]
    fn scc_ids_partition() {
        let adj: Vec<Vec<usize>> = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let comp = scc_ids(4, &[0], |v| adj[v].clone());
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[2], comp[3]);
        assert_ne!(comp[0], comp[2]);
    }

    #[test]
    fn bfs_order() {
        let adj: Vec<Vec<usize>> = vec![vec![2, 1], vec![3], vec![3], vec![]];
        assert_eq!(reachable_bfs(4, 0, |v| adj[v].clone()), vec![0, 2, 1, 3]);
    }
}
