//! Real symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by the implicit QL iteration with Wilkinson-style shifts.
//! Complex Hermitian inputs go through the real embedding
//! `[[Re A, -Im A], [Im A, Re A]]`, whose spectrum is that of `A` doubled.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;

use super::operator::C64;

/// Column-major symmetric eigendecomposition `A = V diag(d) V^T`, eigenvalues
/// ascending.
pub(crate) struct SymEigen {
    pub n: usize,
    pub values: Vec<f64>,
    /// Column-major eigenvectors (column `j` pairs with `values[j]`); empty
    /// when only eigenvalues were requested.
    pub vectors: Vec<f64>,
}

fn hypot(a: f64, b: f64) -> f64 {
    libm::hypot(a, b)
}

/// Decomposes the symmetric matrix given column-major in `a` (only the lower
/// triangle is read).
pub(crate) fn sym_eigen(n: usize, a: &[f64], want_vectors: bool) -> SymEigen {
    if n == 0 {
        return SymEigen {
            n,
            values: Vec::new(),
            vectors: Vec::new(),
        };
    }
    // v[j * n + k] holds row k, column j.
    let mut v = a.to_vec();
    for j in 0..n {
        for k in 0..j {
            v[j * n + k] = v[k * n + j];
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e, want_vectors);
    tql2(n, &mut v, &mut d, &mut e, want_vectors);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = if want_vectors {
        let mut out = vec![0.0; n * n];
        for (c, &k) in order.iter().enumerate() {
            out[c * n..(c + 1) * n].copy_from_slice(&v[k * n..(k + 1) * n]);
        }
        out
    } else {
        Vec::new()
    };
    SymEigen { n, values, vectors }
}

#[inline]
fn at(v: &[f64], n: usize, row: usize, col: usize) -> f64 {
    v[col * n + row]
}

fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64], want_vectors: bool) {
    for j in 0..n {
        d[j] = at(v, n, n - 1, j);
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = at(v, n, i - 1, j);
                v[j * n + i] = 0.0;
                v[i * n + j] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = libm::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[i * n + j] = f;
                g = e[j] + at(v, n, j, j) * f;
                let col = &v[j * n..j * n + i];
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut v[j * n..j * n + i];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = at(v, n, i - 1, j);
                v[j * n + i] = 0.0;
            }
        }
        d[i] = h;
    }
    if want_vectors {
        for i in 0..n - 1 {
            v[i * n + n - 1] = at(v, n, i, i);
            v[i * n + i] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = at(v, n, k, i + 1) / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += at(v, n, k, i + 1) * at(v, n, k, j);
                    }
                    for k in 0..=i {
                        v[j * n + k] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                v[(i + 1) * n + k] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = at(v, n, n - 1, j);
            v[j * n + n - 1] = 0.0;
        }
        v[(n - 1) * n + n - 1] = 1.0;
    } else {
        // Diagonal of the tridiagonal form without accumulating transforms.
        for i in 0..n - 1 {
            v[i * n + n - 1] = at(v, n, i, i);
        }
        for j in 0..n {
            d[j] = at(v, n, n - 1, j);
        }
    }
    e[0] = 0.0;
}

fn tql2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64], want_vectors: bool) {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if want_vectors {
                        let (lo, hi) = v.split_at_mut((i + 1) * n);
                        let ci = &mut lo[i * n..];
                        let ci1 = &mut hi[..n];
                        for k in 0..n {
                            let t = ci1[k];
                            ci1[k] = s * ci[k] + c * t;
                            ci[k] = c * ci[k] - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || iter > 60 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

/// Real symmetric matrix as a column-major slice.
pub(crate) fn real_eigen(m: &DMatrix<f64>, want_vectors: bool) -> SymEigen {
    sym_eigen(m.nrows(), m.as_slice(), want_vectors)
}

/// Column-major real embedding of a Hermitian matrix.
pub(crate) fn embed(m: &DMatrix<C64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i + n, j + n)] = z.re;
            out[(i + n, j)] = z.im;
            out[(i, j + n)] = -z.im;
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix via the real embedding.
pub(crate) fn complex_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let e = real_eigen(&embed(m), false);
    // Each eigenvalue appears twice in ascending order.
    e.values.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

pub(crate) fn symmetrize_in_place(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for j in 0..n {
        for i in j + 1..n {
            let s = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = s;
            m[(j, i)] = s;
        }
    }
}

/// Complex block `A` from its real embedding `[[Re, -Im], [Im, Re]]`.
pub(crate) fn unembed(m: &DMatrix<f64>) -> DMatrix<C64> {
    let n = m.nrows() / 2;
    DMatrix::from_fn(n, n, |i, j| {
        C64::new(
            0.5 * (m[(i, j)] + m[(i + n, j + n)]),
            0.5 * (m[(i + n, j)] - m[(i, j + n)]),
        )
    })
}

/// Sum of singular values through the spectrum of `[[0, X], [X^T, 0]]`,
/// which is `{+s_i, -s_i}` padded with zeros.
pub(crate) fn nuclear_norm_real(x: &DMatrix<f64>) -> f64 {
    let (r, c) = x.shape();
    if r == 0 || c == 0 {
        return 0.0;
    }
    if r == 1 || c == 1 {
        return x.norm();
    }
    let n = r + c;
    let mut jw = DMatrix::<f64>::zeros(n, n);
    jw.view_mut((r, 0), (c, r)).copy_from(&x.transpose());
    jw.view_mut((0, r), (r, c)).copy_from(x);
    let e = real_eigen(&jw, false);
    0.5 * e.values.iter().map(|v| v.abs()).sum::<f64>()
}

pub(crate) fn nuclear_norm_complex(x: &DMatrix<C64>) -> f64 {
    let (r, c) = x.shape();
    if r == 0 || c == 0 {
        return 0.0;
    }
    if x.iter().all(|z| z.im == 0.0) {
        return nuclear_norm_real(&x.map(|z| z.re));
    }
    let n = r + c;
    let mut jw = DMatrix::<C64>::zeros(n, n);
    jw.view_mut((r, 0), (c, r)).copy_from(&x.adjoint());
    jw.view_mut((0, r), (r, c)).copy_from(x);
    // The embedding doubles every eigenvalue.
    0.25 * real_eigen(&embed(&jw), false)
        .values
        .iter()
        .map(|v| v.abs())
        .sum::<f64>()
}
