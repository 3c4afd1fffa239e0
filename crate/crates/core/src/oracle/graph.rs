//! Brute-force graph utilities used as independent checks.

pub fn bfs_distances(nbrs: &[Vec<u32>], source: u32) -> Vec<Option<u32>> {
    crate::grassmannian::bfs(nbrs, source)
}

/// Largest finite BFS distance, or `None` if the graph is disconnected.
pub fn diameter(nbrs: &[Vec<u32>]) -> Option<u32> {
    let mut best = 0;
    for s in 0..nbrs.len() as u32 {
        for d in bfs_distances(nbrs, s) {
            best = best.max(d?);
        }
    }
    Some(best)
}

fn adjacency(nbrs: &[Vec<u32>]) -> Vec<Vec<bool>> {
    let n = nbrs.len();
    let mut adj = vec![vec![false; n]; n];
    for (v, ns) in nbrs.iter().enumerate() {
        for &w in ns {
            adj[v][w as usize] = true;
        }
    }
    adj
}

/// Number of adjacency-preserving vertex permutations, by backtracking.
pub fn count_automorphisms(nbrs: &[Vec<u32>]) -> u64 {
    let adj = adjacency(nbrs);
    let n = nbrs.len();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(adj: &[Vec<bool>], deg: &[usize], v: usize, image: &mut [usize], used: &mut [bool]) -> u64 {
        let n = adj.len();
        if v == n {
            return 1;
        }
        let mut total = 0;
        for c in 0..n {
            if used[c] || deg[c] != deg[v] {
                continue;
            }
            if (0..v).all(|u| adj[u][v] == adj[image[u]][c]) {
                image[v] = c;
                used[c] = true;
                total += rec(adj, deg, v + 1, image, used);
                used[c] = false;
            }
        }
        total
    }
    let deg: Vec<usize> = nbrs.iter().map(Vec::len).collect();
    rec(&adj, &deg, 0, &mut image, &mut used)
}

/// All maximal cliques (Bron–Kerbosch with pivoting), each sorted, in sorted order.
pub fn maximal_cliques(nbrs: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let adj = adjacency(nbrs);
    let mut out = Vec::new();
    fn bk(adj: &[Vec<bool>], r: &mut Vec<u32>, p: Vec<u32>, x: Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        let pivot = *p
            .iter()
            .chain(&x)
            .max_by_key(|&&u| p.iter().filter(|&&w| adj[u as usize][w as usize]).count())
            .unwrap();
        let mut p = p;
        let mut x = x;
        let candidates: Vec<u32> = p.iter().copied().filter(|&v| !adj[pivot as usize][v as usize]).collect();
        for v in candidates {
            let np = p.iter().copied().filter(|&w| adj[v as usize][w as usize]).collect();
            let nx = x.iter().copied().filter(|&w| adj[v as usize][w as usize]).collect();
            r.push(v);
            bk(adj, r, np, nx, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
    }
    bk(&adj, &mut Vec::new(), (0..nbrs.len() as u32).collect(), Vec::new(), &mut out);
    out.sort();
    out
}
