//! Dominance, non-dominated sorting and crowding distance for two
//! minimized objectives.

/// `a` is no worse in both objectives and strictly better in one.
pub fn dominates(a: &[f64; 2], b: &[f64; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

/// Fronts of indices, best first; each front is in ascending index order.
pub fn nondominated_sort(points: &[[f64; 2]]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&points[i], &points[j]) {
                dominated_by_me[i].push(j);
                count[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominated_by_me[j].push(i);
                count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Rank of every point (0 = non-dominated).
pub fn ranks(fronts: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut r = vec![0; n];
    for (k, front) in fronts.iter().enumerate() {
        for &i in front {
            r[i] = k;
        }
    }
    r
}

/// Crowding distance of each point of one front. Boundary points are
/// infinite; each objective's contribution is normalized by its range on the
/// front, and an objective with zero range contributes nothing.
pub fn crowding_distance(front: &[[f64; 2]]) -> Vec<f64> {
    let n = front.len();
    let mut d = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    for m in 0..2 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| front[a][m].total_cmp(&front[b][m]).then(a.cmp(&b)));
        let (lo, hi) = (front[order[0]][m], front[order[n - 1]][m]);
        d[order[0]] = f64::INFINITY;
        d[order[n - 1]] = f64::INFINITY;
        if hi <= lo {
            continue;
        }
        for k in 1..n - 1 {
            d[order[k]] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / (hi - lo);
        }
    }
    d
}
