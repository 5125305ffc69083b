//! Half-open run lists `[lo, hi)` over an ordered coordinate, shared by the
//! dyadic and interval set types.

/// Sorts, merges overlapping or touching runs and drops empty ones.
pub(crate) fn normalize<T: Ord + Clone>(mut runs: Vec<(T, T)>) -> Vec<(T, T)> {
    runs.retain(|(lo, hi)| lo < hi);
    runs.sort();
    let mut out: Vec<(T, T)> = Vec::with_capacity(runs.len());
    for (lo, hi) in runs {
        match out.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Pointwise boolean combination of two normalized run lists inside
/// `[lo, hi)`. The result is normalized.
pub(crate) fn sweep<T: Ord + Clone>(
    a: &[(T, T)],
    b: &[(T, T)],
    lo: &T,
    hi: &T,
    op: impl Fn(bool, bool) -> bool,
) -> Vec<(T, T)> {
    let mut points: Vec<&T> = Vec::with_capacity(2 * (a.len() + b.len()) + 2);
    points.push(lo);
    points.push(hi);
    for (x, y) in a.iter().chain(b) {
        points.push(x);
        points.push(y);
    }
    points.sort();
    points.dedup();

    let mut out: Vec<(T, T)> = Vec::new();
    let (mut ia, mut ib) = (0, 0);
    for w in points.windows(2) {
        let (p, q) = (w[0], w[1]);
        if p < lo || q > hi {
            continue;
        }
        while ia < a.len() && a[ia].1 <= *p {
            ia += 1;
        }
        while ib < b.len() && b[ib].1 <= *p {
            ib += 1;
        }
        let in_a = ia < a.len() && a[ia].0 <= *p;
        let in_b = ib < b.len() && b[ib].0 <= *p;
        if op(in_a, in_b) {
            match out.last_mut() {
                Some(last) if last.1 == *p => last.1 = q.clone(),
                _ => out.push((p.clone(), q.clone())),
            }
        }
    }
    out
}

/// `a ⊆ b` for normalized run lists.
pub(crate) fn subset<T: Ord>(a: &[(T, T)], b: &[(T, T)]) -> bool {
    let mut j = 0;
    for (lo, hi) in a {
        while j < b.len() && b[j].1 <= *lo {
            j += 1;
        }
        if j == b.len() || b[j].0 > *lo || b[j].1 < *hi {
            return false;
        }
    }
    true
}

/// True when the normalized run lists share no point.
pub(crate) fn disjoint<T: Ord>(a: &[(T, T)], b: &[(T, T)]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].1 <= b[j].0 {
            i += 1;
        } else if b[j].1 <= a[i].0 {
            j += 1;
        } else {
            return false;
        }
    }
    true
}
