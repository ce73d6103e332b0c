//! Classic multiobjective test problems, reimplemented from their standard
//! published formulas:
//!
//! - `jos1`, `jos1_n200`: Jin, Olhofer and Sendhoff (2001), in the
//!   half-squared-distance form `F_i(x) = 1/2 |x - a_i|^2`.
//! - `sp1`: Sefrioui and Periaux (2000).
//! - `lov1`: Lovison (2011).
//! - `ikk1`: Ikeda, Kita and Kobayashi (2001).
//! - `mop7`: Van Veldhuizen (1999).
//! - `toi4`: Toint's test set as used by Mita, Fukuda and Yamashita (2019).
//! - `fds`: Fliege, Grana Drummond and Svaiter (2009).
//! - `ap1`: Ansary and Panda (2015).
//! - `quad_ill`: separable quadratics with curvatures spread over `[1, 100]`,
//!   a stress test for the Jacobian Lipschitz constant.
//! - `ff1`: Fonseca and Fleming (1995).
//! - `pol`: Poloni et al. (2000).
//! - `vu1`: Viennet (1996) style pair.

use std::sync::Arc;

use super::{FnProblem, SharedProblem};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

fn boxed(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    (vec![lo; n], vec![hi; n])
}

fn mat(rows: Vec<Vec<f64>>) -> Matrix {
    Matrix::from_rows(&rows).expect("rows have equal length")
}

fn build(
    name: &str,
    m: usize,
    (lower, upper): (Vec<f64>, Vec<f64>),
    convex: bool,
    value: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    jacobian: impl Fn(&[f64]) -> Matrix + Send + Sync + 'static,
) -> SharedProblem {
    let p = FnProblem::new(name, m, lower, upper, value, jacobian)
        .expect("suite problems are well formed")
        .with_convex(convex);
    Arc::new(p)
}

/// Separable quadratics `F_i(x) = 1/2 sum_k c_ik (x_k - a_ik)^2`.
fn separable_quadratic(
    name: &str,
    curvature: Vec<Vec<f64>>,
    centers: Vec<Vec<f64>>,
    bounds: (f64, f64),
) -> SharedProblem {
    let m = curvature.len();
    let n = curvature[0].len();
    let c = Arc::new(curvature);
    let a = Arc::new(centers);
    let (c2, a2) = (Arc::clone(&c), Arc::clone(&a));
    build(
        name,
        m,
        boxed(n, bounds.0, bounds.1),
        true,
        move |x| {
            c.iter()
                .zip(a.iter())
                .map(|(ci, ai)| {
                    0.5 * x
                        .iter()
                        .zip(ci.iter().zip(ai))
                        .map(|(xk, (ck, ak))| ck * (xk - ak) * (xk - ak))
                        .sum::<f64>()
                })
                .collect()
        },
        move |x| {
            mat(c2
                .iter()
                .zip(a2.iter())
                .map(|(ci, ai)| {
                    x.iter()
                        .zip(ci.iter().zip(ai))
                        .map(|(xk, (ck, ak))| ck * (xk - ak))
                        .collect()
                })
                .collect())
        },
    )
}

fn jos1(name: &str, n: usize) -> SharedProblem {
    separable_quadratic(
        name,
        vec![vec![1.0; n], vec![1.0; n]],
        vec![vec![0.0; n], vec![2.0; n]],
        (-2.0, 4.0),
    )
}

fn quad_ill() -> SharedProblem {
    let n = 50;
    let spread = |k: usize| 10f64.powf(2.0 * k as f64 / (n - 1) as f64);
    let c1: Vec<f64> = (0..n).map(spread).collect();
    let c2: Vec<f64> = (0..n).map(|k| spread(n - 1 - k)).collect();
    separable_quadratic(
        "quad_ill",
        vec![c1, c2],
        vec![vec![0.0; n], vec![1.0; n]],
        (-5.0, 5.0),
    )
}

fn sp1() -> SharedProblem {
    build(
        "sp1",
        2,
        boxed(2, -10.0, 10.0),
        true,
        |x| {
            let s = x[0] - x[1];
            vec![
                (x[0] - 1.0).powi(2) + s * s,
                (x[1] - 3.0).powi(2) + s * s,
            ]
        },
        |x| {
            let s = x[0] - x[1];
            mat(vec![
                vec![2.0 * (x[0] - 1.0) + 2.0 * s, -2.0 * s],
                vec![2.0 * s, 2.0 * (x[1] - 3.0) - 2.0 * s],
            ])
        },
    )
}

fn lov1() -> SharedProblem {
    build(
        "lov1",
        2,
        boxed(2, -10.0, 10.0),
        true,
        |x| {
            vec![
                1.05 * x[0] * x[0] + 0.98 * x[1] * x[1],
                0.99 * (x[0] - 3.0).powi(2) + 1.03 * (x[1] - 2.5).powi(2),
            ]
        },
        |x| {
            mat(vec![
                vec![2.1 * x[0], 1.96 * x[1]],
                vec![1.98 * (x[0] - 3.0), 2.06 * (x[1] - 2.5)],
            ])
        },
    )
}

fn ikk1() -> SharedProblem {
    build(
        "ikk1",
        3,
        boxed(2, -50.0, 50.0),
        true,
        |x| vec![x[0] * x[0], (x[0] - 20.0).powi(2), x[1] * x[1]],
        |x| {
            mat(vec![
                vec![2.0 * x[0], 0.0],
                vec![2.0 * (x[0] - 20.0), 0.0],
                vec![0.0, 2.0 * x[1]],
            ])
        },
    )
}

fn mop7() -> SharedProblem {
    build(
        "mop7",
        3,
        boxed(2, -10.0, 10.0),
        true,
        |x| {
            let (a, b) = (x[0], x[1]);
            vec![
                (a - 2.0).powi(2) / 2.0 + (b + 1.0).powi(2) / 13.0 + 3.0,
                (a + b - 3.0).powi(2) / 36.0 + (-a + b + 2.0).powi(2) / 8.0 - 17.0,
                (a + 2.0 * b - 1.0).powi(2) / 175.0 + (2.0 * b - a).powi(2) / 17.0 - 13.0,
            ]
        },
        |x| {
            let (a, b) = (x[0], x[1]);
            let s2 = (a + b - 3.0) / 18.0;
            let t2 = (-a + b + 2.0) / 4.0;
            let s3 = 2.0 * (a + 2.0 * b - 1.0) / 175.0;
            let t3 = 2.0 * (2.0 * b - a) / 17.0;
            mat(vec![
                vec![a - 2.0, 2.0 * (b + 1.0) / 13.0],
                vec![s2 - t2, s2 + t2],
                vec![s3 - t3, 2.0 * s3 + 2.0 * t3],
            ])
        },
    )
}

fn toi4() -> SharedProblem {
    build(
        "toi4",
        2,
        boxed(4, -2.0, 5.0),
        true,
        |x| {
            vec![
                x[0] * x[0] + x[1] * x[1] + 1.0,
                0.5 * ((x[0] - x[1]).powi(2) + (x[2] - x[3]).powi(2)) + 1.0,
            ]
        },
        |x| {
            let s = x[0] - x[1];
            let t = x[2] - x[3];
            mat(vec![
                vec![2.0 * x[0], 2.0 * x[1], 0.0, 0.0],
                vec![s, -s, t, -t],
            ])
        },
    )
}

fn fds() -> SharedProblem {
    let n = 10usize;
    let nf = n as f64;
    build(
        "fds",
        3,
        boxed(n, -2.0, 2.0),
        true,
        move |x| {
            let mut f = [0.0; 3];
            for (i, &xk) in x.iter().enumerate() {
                let k = (i + 1) as f64;
                let ex = (-xk).exp();
                f[0] += k * (xk - k).powi(2);
                f[1] += ex + xk * xk;
                f[2] += k * (nf - k + 1.0) * ex;
            }
            vec![f[0] / (nf * nf), f[1], f[2] / (nf * (nf + 1.0))]
        },
        move |x| {
            let mut jac = Matrix::zeros(3, n);
            for (i, &xk) in x.iter().enumerate() {
                let k = (i + 1) as f64;
                let ex = (-xk).exp();
                jac.row_mut(0)[i] = 2.0 * k * (xk - k) / (nf * nf);
                jac.row_mut(1)[i] = -ex + 2.0 * xk;
                jac.row_mut(2)[i] = -k * (nf - k + 1.0) * ex / (nf * (nf + 1.0));
            }
            jac
        },
    )
}

fn ap1() -> SharedProblem {
    build(
        "ap1",
        3,
        boxed(2, -3.0, 3.0),
        true,
        |x| {
            let (a, b) = (x[0], x[1]);
            vec![
                0.25 * ((a - 1.0).powi(4) + 2.0 * (b - 2.0).powi(4)),
                ((a + b) / 2.0).exp() + a * a + b * b,
                ((-a).exp() + 2.0 * (-b).exp()) / 6.0,
            ]
        },
        |x| {
            let (a, b) = (x[0], x[1]);
            let e = ((a + b) / 2.0).exp();
            mat(vec![
                vec![(a - 1.0).powi(3), 2.0 * (b - 2.0).powi(3)],
                vec![0.5 * e + 2.0 * a, 0.5 * e + 2.0 * b],
                vec![-(-a).exp() / 6.0, -(-b).exp() / 3.0],
            ])
        },
    )
}

fn ff1() -> SharedProblem {
    let n = 2usize;
    let shift = 1.0 / (n as f64).sqrt();
    build(
        "ff1",
        2,
        boxed(n, -1.0, 1.0),
        false,
        move |x| {
            let s1: f64 = x.iter().map(|v| (v - shift).powi(2)).sum();
            let s2: f64 = x.iter().map(|v| (v + shift).powi(2)).sum();
            vec![1.0 - (-s1).exp(), 1.0 - (-s2).exp()]
        },
        move |x| {
            let s1: f64 = x.iter().map(|v| (v - shift).powi(2)).sum();
            let s2: f64 = x.iter().map(|v| (v + shift).powi(2)).sum();
            let (e1, e2) = ((-s1).exp(), (-s2).exp());
            mat(vec![
                x.iter().map(|v| 2.0 * (v - shift) * e1).collect(),
                x.iter().map(|v| 2.0 * (v + shift) * e2).collect(),
            ])
        },
    )
}

fn pol() -> SharedProblem {
    let (s1, c1, s2, c2) = (1f64.sin(), 1f64.cos(), 2f64.sin(), 2f64.cos());
    let a1 = 0.5 * s1 - 2.0 * c1 + s2 - 1.5 * c2;
    let a2 = 1.5 * s1 - c1 + 2.0 * s2 - 0.5 * c2;
    let b = |x: &[f64]| {
        let (sx, cx, sy, cy) = (x[0].sin(), x[0].cos(), x[1].sin(), x[1].cos());
        (
            0.5 * sx - 2.0 * cx + sy - 1.5 * cy,
            1.5 * sx - cx + 2.0 * sy - 0.5 * cy,
        )
    };
    let pi = std::f64::consts::PI;
    build(
        "pol",
        2,
        boxed(2, -pi, pi),
        false,
        move |x| {
            let (b1, b2) = b(x);
            vec![
                1.0 + (a1 - b1).powi(2) + (a2 - b2).powi(2),
                (x[0] + 3.0).powi(2) + (x[1] + 1.0).powi(2),
            ]
        },
        move |x| {
            let (b1, b2) = b(x);
            let (sx, cx, sy, cy) = (x[0].sin(), x[0].cos(), x[1].sin(), x[1].cos());
            let db1 = [0.5 * cx + 2.0 * sx, cy + 1.5 * sy];
            let db2 = [1.5 * cx + sx, 2.0 * cy + 0.5 * sy];
            let r1 = a1 - b1;
            let r2 = a2 - b2;
            mat(vec![
                (0..2).map(|k| -2.0 * r1 * db1[k] - 2.0 * r2 * db2[k]).collect(),
                vec![2.0 * (x[0] + 3.0), 2.0 * (x[1] + 1.0)],
            ])
        },
    )
}

fn vu1() -> SharedProblem {
    build(
        "vu1",
        2,
        boxed(2, -3.0, 3.0),
        false,
        |x| {
            let r = x[0] * x[0] + x[1] * x[1] + 1.0;
            vec![1.0 / r, x[0] * x[0] + 3.0 * x[1] * x[1] + 1.0]
        },
        |x| {
            let r = x[0] * x[0] + x[1] * x[1] + 1.0;
            let s = -2.0 / (r * r);
            mat(vec![
                vec![s * x[0], s * x[1]],
                vec![2.0 * x[0], 6.0 * x[1]],
            ])
        },
    )
}

/// The full benchmark suite, convex problems first.
pub fn suite() -> Vec<SharedProblem> {
    vec![
        jos1("jos1", 5),
        jos1("jos1_n200", 200),
        sp1(),
        lov1(),
        ikk1(),
        mop7(),
        toi4(),
        fds(),
        ap1(),
        quad_ill(),
        ff1(),
        pol(),
        vu1(),
    ]
}

pub fn problem_names() -> Vec<String> {
    suite().iter().map(|p| p.name().to_string()).collect()
}

pub fn find_problem(name: &str) -> Result<SharedProblem> {
    suite()
        .into_iter()
        .find(|p| p.name() == name)
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}
