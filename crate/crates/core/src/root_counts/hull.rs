//! Exact convex hulls of lattice point sets by beneath-beyond insertion.
//!
//! The boundary is kept as a list of simplicial facets with outward integer
//! normals. Each inserted point that lies strictly beyond some facet cones
//! over the visible facets, which also yields a placing triangulation.

use std::collections::HashMap;

use super::RootCountError;

type Int = i128;

fn ovf() -> RootCountError {
    RootCountError::Overflow
}

fn mul(a: Int, b: Int) -> Result<Int, RootCountError> {
    a.checked_mul(b).ok_or_else(ovf)
}

fn sub(a: Int, b: Int) -> Result<Int, RootCountError> {
    a.checked_sub(b).ok_or_else(ovf)
}

fn dot(a: &[Int], b: &[Int]) -> Result<Int, RootCountError> {
    a.iter()
        .zip(b)
        .try_fold(0 as Int, |acc, (x, y)| acc.checked_add(mul(*x, *y)?).ok_or_else(ovf))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub(crate) fn det(mut a: Vec<Vec<Int>>) -> Result<Int, RootCountError> {
    let n = a.len();
    if n == 0 {
        return Ok(1);
    }
    let mut sign: Int = 1;
    let mut prev: Int = 1;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = sub(mul(a[i][j], a[k][k])?, mul(a[i][k], a[k][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn primitive(v: &mut [Int]) {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

/// Row echelon form over the integers with gcd-normalized rows.
/// Returns the pivot columns.
fn echelon(rows: &mut Vec<Vec<Int>>) -> Result<Vec<usize>, RootCountError> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if rows[i][c] == 0 {
                continue;
            }
            let (a, b) = (rows[r][c], rows[i][c]);
            for j in 0..ncols {
                rows[i][j] = sub(mul(rows[i][j], a)?, mul(rows[r][j], b)?)?;
            }
            primitive(&mut rows[i]);
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    Ok(pivots)
}

pub(crate) fn rank(rows: &[Vec<Int>]) -> Result<usize, RootCountError> {
    let mut m = rows.to_vec();
    Ok(echelon(&mut m)?.len())
}

/// Outcome of a hull computation on an indexed point list.
#[derive(Clone, Debug)]
pub(crate) struct Hull {
    /// Affine dimension of the point set.
    pub dim: usize,
    /// Indices of the hull vertices, ascending.
    pub vertices: Vec<usize>,
    /// Full-dimensional simplices as index tuples; empty when `dim < n`.
    pub simplices: Vec<Vec<usize>>,
    /// `n!` times the Euclidean volume; zero for degenerate hulls.
    pub normalized_volume: u128,
}

struct Facet {
    pts: Vec<usize>,
    normal: Vec<Int>,
    offset: Int,
}

/// Hull of `points` (all of length `n`, deduplicated by the caller).
pub(crate) fn hull(points: &[Vec<i64>]) -> Result<Hull, RootCountError> {
    let pts: Vec<Vec<Int>> = points.iter().map(|p| p.iter().map(|&x| x as Int).collect()).collect();
    hull_int(&pts)
}

fn hull_int(pts: &[Vec<Int>]) -> Result<Hull, RootCountError> {
    let n = pts[0].len();
    if pts.len() == 1 {
        return Ok(Hull { dim: 0, vertices: vec![0], simplices: vec![], normalized_volume: 0 });
    }
    // Greedy affinely independent subset.
    let mut chosen = vec![0usize];
    let mut diffs: Vec<Vec<Int>> = Vec::new();
    for (i, p) in pts.iter().enumerate().skip(1) {
        if diffs.len() == n {
            break;
        }
        let d: Vec<Int> = p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect();
        diffs.push(d);
        if rank(&diffs)? == diffs.len() {
            chosen.push(i);
        } else {
            diffs.pop();
        }
    }
    let k = diffs.len();
    if k == 0 {
        return Ok(Hull { dim: 0, vertices: vec![0], simplices: vec![], normalized_volume: 0 });
    }
    if k < n {
        // Project onto k coordinates on which the affine hull maps injectively.
        let mut m = diffs.clone();
        let coords = echelon(&mut m)?;
        let proj: Vec<Vec<Int>> = pts.iter().map(|p| coords.iter().map(|&c| p[c]).collect()).collect();
        let sub = hull_int(&proj)?;
        return Ok(Hull { dim: k, vertices: sub.vertices, simplices: vec![], normalized_volume: 0 });
    }
    if n == 1 {
        let (imin, _) = pts.iter().enumerate().min_by_key(|(_, p)| p[0]).unwrap();
        let (imax, _) = pts.iter().enumerate().max_by_key(|(_, p)| p[0]).unwrap();
        let len = (pts[imax][0] - pts[imin][0]) as u128;
        let mut v = vec![imin, imax];
        v.sort_unstable();
        return Ok(Hull { dim: 1, vertices: v.clone(), simplices: vec![v], normalized_volume: len });
    }
    let (simplices, facets, nvol) = beneath_beyond(pts, &chosen)?;
    let vertices = facet_vertices(n, &facets)?;
    Ok(Hull { dim: n, vertices, simplices, normalized_volume: nvol })
}

fn simplex_det(pts: &[Vec<Int>], idx: &[usize]) -> Result<Int, RootCountError> {
    let base = &pts[idx[0]];
    let m: Vec<Vec<Int>> = idx[1..]
        .iter()
        .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    det(m)
}

fn make_facet(pts: &[Vec<Int>], mut idx: Vec<usize>, interior: &[Int], scale: Int) -> Result<Facet, RootCountError> {
    idx.sort_unstable();
    let n = pts[0].len();
    let base = &pts[idx[0]];
    let rows: Vec<Vec<Int>> = idx[1..]
        .iter()
        .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal = Vec::with_capacity(n);
    for c in 0..n {
        let minor: Vec<Vec<Int>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect())
            .collect();
        let d = det(minor)?;
        normal.push(if c % 2 == 0 { d } else { -d });
    }
    primitive(&mut normal);
    // `interior` is `scale` times an interior point.
    let base_scaled: Vec<Int> = base.iter().map(|v| v * scale).collect();
    let to_inside: Vec<Int> = interior.iter().zip(&base_scaled).map(|(a, b)| a - b).collect();
    let side = dot(&normal, &to_inside)?;
    debug_assert!(side != 0, "degenerate facet");
    if side > 0 {
        for v in normal.iter_mut() {
            *v = -*v;
        }
    }
    let offset = dot(&normal, base)?;
    Ok(Facet { pts: idx, normal, offset })
}

#[allow(clippy::type_complexity)]
fn beneath_beyond(
    pts: &[Vec<Int>],
    initial: &[usize],
) -> Result<(Vec<Vec<usize>>, Vec<Facet>, u128), RootCountError> {
    let n = pts[0].len();
    let scale = (n + 1) as Int;
    let mut interior = vec![0 as Int; n];
    for &i in initial {
        for (a, b) in interior.iter_mut().zip(&pts[i]) {
            *a += b;
        }
    }
    let mut simplex0 = initial.to_vec();
    simplex0.sort_unstable();
    let mut nvol = simplex_det(pts, &simplex0)?.unsigned_abs();
    let mut simplices = vec![simplex0.clone()];
    let mut facets = Vec::new();
    for skip in 0..simplex0.len() {
        let f: Vec<usize> = simplex0.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect();
        facets.push(make_facet(pts, f, &interior, scale)?);
    }
    for (pi, p) in pts.iter().enumerate() {
        if initial.contains(&pi) {
            continue;
        }
        let mut visible = Vec::new();
        for (fi, f) in facets.iter().enumerate() {
            if dot(&f.normal, p)? > f.offset {
                visible.push(fi);
            }
        }
        if visible.is_empty() {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for &fi in &visible {
            let f = &facets[fi].pts;
            for skip in 0..f.len() {
                let r: Vec<usize> = f.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect();
                *ridges.entry(r).or_insert(0) += 1;
            }
            let mut s = f.clone();
            s.push(pi);
            s.sort_unstable();
            nvol = nvol.checked_add(simplex_det(pts, &s)?.unsigned_abs()).ok_or_else(ovf)?;
            simplices.push(s);
        }
        let mut horizon: Vec<Vec<usize>> = ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
        horizon.sort();
        let mut keep = vec![true; facets.len()];
        for &fi in &visible {
            keep[fi] = false;
        }
        let mut next: Vec<Facet> = facets
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(f, _)| f)
            .collect();
        for mut r in horizon {
            r.push(pi);
            next.push(make_facet(pts, r, &interior, scale)?);
        }
        facets = next;
    }
    Ok((simplices, facets, nvol))
}

/// A boundary point is a vertex iff the normals of the facets through it span.
fn facet_vertices(n: usize, facets: &[Facet]) -> Result<Vec<usize>, RootCountError> {
    let mut normals: HashMap<usize, Vec<Vec<Int>>> = HashMap::new();
    for f in facets {
        for &p in &f.pts {
            let list = normals.entry(p).or_default();
            if !list.contains(&f.normal) {
                list.push(f.normal.clone());
            }
        }
    }
    let mut out = Vec::new();
    for (p, ns) in normals {
        if ns.len() >= n && rank(&ns)? == n {
            out.push(p);
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<i64>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(det(vec![vec![2, 0], vec![0, 3]]).unwrap(), 6);
        assert_eq!(det(vec![vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(det(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).unwrap(), -3);
        assert_eq!(det(vec![vec![1, 2], vec![2, 4]]).unwrap(), 0);
    }

    #[test]
    fn square_with_center() {
        let h = hull(&pts(&[&[0, 0], &[1, 1], &[2, 0], &[0, 2], &[2, 2], &[1, 0]])).unwrap();
        assert_eq!(h.dim, 2);
        assert_eq!(h.vertices, vec![0, 2, 3, 4]);
        assert_eq!(h.normalized_volume, 8);
    }

    #[test]
    fn edge_midpoint_before_endpoint_is_not_a_vertex() {
        let h = hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[2, 0]])).unwrap();
        assert_eq!(h.vertices, vec![0, 2, 3]);
        assert_eq!(h.normalized_volume, 2);
    }

    #[test]
    fn cube_in_three_dimensions() {
        let mut p = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    p.push(vec![x, y, z]);
                }
            }
        }
        let h = hull(&p).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.normalized_volume, 8 * 6);
        let total: u128 = h
            .simplices
            .iter()
            .map(|s| simplex_det(&p.iter().map(|q| q.iter().map(|&v| v as Int).collect()).collect::<Vec<_>>(), s).unwrap().unsigned_abs())
            .sum();
        assert_eq!(total, 48);
    }

    #[test]
    fn degenerate_sets() {
        let h = hull(&pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(h.vertices, vec![0, 2]);
        assert_eq!(h.normalized_volume, 0);
        let h = hull(&pts(&[&[0, 0, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 2], &[2, 2, 4]])).unwrap();
        assert_eq!(h.dim, 2);
        assert_eq!(h.vertices, vec![0, 1, 2, 4]);
    }
}
