//! `max c·y` subject to `|r_i · y| <= 1`, by a primal active-set walk from
//! the origin. Sized for the small dense problems of polar evaluation
//! (dimension at most about 10, a few hundred rows).

const MAX_DIM: usize = 16;

/// Outcome of [`max_over_slabs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlabLp {
    Optimal(f64),
    Unbounded,
}

/// Solves `G λ = b` for a small symmetric positive definite `G` (row-major, k×k).
fn solve_small(g: &mut [f64], b: &mut [f64], k: usize) -> bool {
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&x, &y| g[x * k + col].abs().total_cmp(&g[y * k + col].abs()))
            .expect("nonempty");
        if g[piv * k + col].abs() < 1e-300 {
            return false;
        }
        if piv != col {
            for j in 0..k {
                g.swap(piv * k + j, col * k + j);
            }
            b.swap(piv, col);
        }
        let d = g[col * k + col];
        for r in col + 1..k {
            let f = g[r * k + col] / d;
            if f != 0.0 {
                for j in col..k {
                    g[r * k + j] -= f * g[col * k + j];
                }
                b[r] -= f * b[col];
            }
        }
    }
    for r in (0..k).rev() {
        let mut s = b[r];
        for j in r + 1..k {
            s -= g[r * k + j] * b[j];
        }
        b[r] = s / g[r * k + r];
    }
    true
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maximizes `c · y` over the symmetric polytope `{y : |r_i · y| <= 1}`;
/// `rows` holds the `r_i` back to back, each of length `c.len()`.
pub fn max_over_slabs(c: &[f64], rows: &[f64]) -> SlabLp {
    let d = c.len();
    assert!(d > 0 && d <= MAX_DIM, "dimension {d} outside 1..={MAX_DIM}");
    let m = rows.len() / d;
    let scale = dot(c, c).sqrt();
    if scale == 0.0 {
        return SlabLp::Optimal(0.0);
    }
    let tol = 1e-12;
    let mut y = [0.0; MAX_DIM];
    // Active constraints: (row index, sign) with sign · r · y = 1.
    let mut active: Vec<(usize, f64)> = Vec::with_capacity(d);
    let mut basis = [[0.0; MAX_DIM]; MAX_DIM];
    let row = |i: usize| &rows[i * d..(i + 1) * d];

    for _ in 0..(50 * (m + d)) {
        // Orthonormal basis of the active normals by modified Gram-Schmidt.
        let k = active.len();
        for (j, &(i, _)) in active.iter().enumerate() {
            let mut q = [0.0; MAX_DIM];
            q[..d].copy_from_slice(row(i));
            for b in basis.iter().take(j) {
                let p = dot(&q[..d], &b[..d]);
                for t in 0..d {
                    q[t] -= p * b[t];
                }
            }
            let nrm = dot(&q[..d], &q[..d]).sqrt();
            for t in 0..d {
                basis[j][t] = q[t] / nrm;
            }
        }
        let mut p = [0.0; MAX_DIM];
        p[..d].copy_from_slice(c);
        for b in basis.iter().take(k) {
            let s = dot(&p[..d], &b[..d]);
            for t in 0..d {
                p[t] -= s * b[t];
            }
        }
        let pn = dot(&p[..d], &p[..d]).sqrt();
        if pn > tol * scale && k < d {
            // Ratio test along p; ties go to the lowest row index.
            let mut best: Option<(f64, usize, f64)> = None;
            for i in 0..m {
                if active.iter().any(|&(j, _)| j == i) {
                    continue;
                }
                let r = row(i);
                let rp = dot(r, &p[..d]);
                if rp.abs() <= 1e-14 * pn * dot(r, r).sqrt() {
                    continue;
                }
                let s = rp.signum();
                let slack = (1.0 - s * dot(r, &y[..d])).max(0.0);
                let t = slack / rp.abs();
                if best.map_or(true, |(bt, _, _)| t < bt) {
                    best = Some((t, i, s));
                }
            }
            let Some((t, i, s)) = best else { return SlabLp::Unbounded };
            for j in 0..d {
                y[j] += t * p[j];
            }
            active.push((i, s));
            continue;
        }
        // c lies in the span of the active normals: check the multipliers.
        let mut g = [0.0; MAX_DIM * MAX_DIM];
        let mut b = [0.0; MAX_DIM];
        for (x, &(i, si)) in active.iter().enumerate() {
            b[x] = si * dot(row(i), c);
            for (z, &(j, sj)) in active.iter().enumerate() {
                g[x * k + z] = si * sj * dot(row(i), row(j));
            }
        }
        if k == 0 || !solve_small(&mut g, &mut b, k) {
            return SlabLp::Optimal(dot(c, &y[..d]));
        }
        let (worst, lambda) = b[..k]
            .iter()
            .copied()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty active set");
        if lambda >= -1e-12 * scale {
            return SlabLp::Optimal(dot(c, &y[..d]));
        }
        active.remove(worst);
    }
    SlabLp::Optimal(dot(c, &y[..d]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn value(r: SlabLp) -> f64 {
        match r {
            SlabLp::Optimal(v) => v,
            SlabLp::Unbounded => panic!("unexpected unbounded"),
        }
    }

    #[test]
    fn cube_support_is_l1_norm() {
        let rows = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        let c = [0.3, -2.0, 0.7];
        assert!((value(max_over_slabs(&c, &rows)) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn unbounded_when_rows_do_not_span() {
        let rows = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        assert_eq!(max_over_slabs(&[0.0, 0.0, 1.0], &rows), SlabLp::Unbounded);
        assert!((value(max_over_slabs(&[1.0, 1.0, 0.0], &rows)) - 2.0).abs() < 1e-14);
    }

    /// Brute force in 3-D: the optimum sits at a vertex, the solution of
    /// three tight constraints.
    fn brute(c: &[f64; 3], rows: &[[f64; 3]]) -> f64 {
        let mut best = f64::NEG_INFINITY;
        let m = rows.len();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    for signs in 0..8 {
                        let s = |b: usize| if signs >> b & 1 == 1 { -1.0 } else { 1.0 };
                        let a = nalgebra::Matrix3::from_rows(&[
                            nalgebra::RowVector3::from(rows[i]),
                            nalgebra::RowVector3::from(rows[j]),
                            nalgebra::RowVector3::from(rows[k]),
                        ]);
                        let rhs = nalgebra::Vector3::new(s(0), s(1), s(2));
                        let Some(inv) = a.try_inverse() else { continue };
                        let y = inv * rhs;
                        let feasible = rows
                            .iter()
                            .all(|r| (r[0] * y[0] + r[1] * y[1] + r[2] * y[2]).abs() <= 1.0 + 1e-9);
                        if feasible {
                            best = best.max(c[0] * y[0] + c[1] * y[1] + c[2] * y[2]);
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn matches_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let m = rng.gen_range(3..9);
            let rows: Vec<[f64; 3]> = (0..m)
                .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect();
            let c = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            let got = value(max_over_slabs(&c, &flat));
            let want = brute(&c, &rows);
            assert!((got - want).abs() < 1e-9 * want.abs().max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn degenerate_vertices_terminate() {
        // Octahedron |x| + |y| + |z| <= 1: four slabs meet at every vertex.
        let mut rows = Vec::new();
        for s in 0..4 {
            let a = if s & 1 == 1 { -1.0 } else { 1.0 };
            let b = if s & 2 == 2 { -1.0 } else { 1.0 };
            rows.extend([1.0, a, b]);
        }
        for c in [[1.0, 0.0, 0.0], [0.2, 0.3, 0.5], [1.0, 1.0, 1.0]] {
            let got = value(max_over_slabs(&c, &rows));
            let want = c.iter().map(|v: &f64| v.abs()).fold(0.0, f64::max);
            assert!((got - want).abs() < 1e-12, "{c:?}: {got}");
        }
    }
}
