use ndarray::prelude::*;
use ndarray_linalg::{Eigh, Eig, SVD, Solve, Inverse, UPLO};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 { Complex64::new(re, im) }

fn main() {
    // a generic Hermitian complex matrix
    let a = array![
        [c(1.0, 0.0), c(0.3, -0.7), c(0.1, 0.2)],
        [c(0.3, 0.7), c(-0.5, 0.0), c(0.0, -0.4)],
        [c(0.1, -0.2), c(0.0, 0.4), c(2.0, 0.0)]
    ];
    let (vals, vecs) = a.eigh(UPLO::Lower).unwrap();
    for k in 0..3 {
        let col = vecs.column(k).to_owned();
        let colc = col.mapv(|z| z.conj());
        let d1: f64 = (&a.dot(&col) - &col.mapv(|z| z * c(vals[k], 0.0))).iter().map(|z| z.norm()).sum();
        let d2: f64 = (&a.dot(&colc) - &colc.mapv(|z| z * c(vals[k], 0.0))).iter().map(|z| z.norm()).sum();
        println!("eigh k={k}: col dev {d1:.2e}, conj(col) dev {d2:.2e}");
    }
    // general complex
    let m = array![
        [c(1.0, 0.5), c(2.0, -1.0), c(0.0, 0.3)],
        [c(0.0, 0.0), c(-1.0, 0.2), c(1.0, 0.0)],
        [c(0.5, 0.1), c(0.0, 0.0), c(0.7, -0.3)]
    ];
    let (ev, evec) = m.eig().unwrap();
    for k in 0..3 {
        let col = evec.column(k).to_owned();
        let colc = col.mapv(|z| z.conj());
        let d1: f64 = (&m.dot(&col) - &col.mapv(|z| z * ev[k])).iter().map(|z| z.norm()).sum();
        let d2: f64 = (&m.dot(&colc) - &colc.mapv(|z| z * ev[k])).iter().map(|z| z.norm()).sum();
        let d3: f64 = (&m.dot(&colc) - &colc.mapv(|z| z * ev[k].conj())).iter().map(|z| z.norm()).sum();
        println!("eig k={k}: col dev {d1:.2e}, conj col (same eval) {d2:.2e}, conj col conj eval {d3:.2e}");
    }
    // svd
    let (u, s, vt) = m.svd(true, true).unwrap();
    let u = u.unwrap(); let vt = vt.unwrap();
    let mut smat: Array2<Complex64> = Array2::zeros((3, 3));
    for i in 0..3 { smat[[i, i]] = c(s[i], 0.0); }
    let recon = u.dot(&smat).dot(&vt);
    let dev: f64 = (&recon - &m).iter().map(|z| z.norm()).sum();
    println!("svd reconstruction dev {dev:.2e}");
    // solve
    let b = array![c(1.0, 0.0), c(0.0, 1.0), c(2.0, -1.0)];
    let x = m.solve(&b).unwrap();
    let dev: f64 = (&m.dot(&x) - &b).iter().map(|z| z.norm()).sum();
    println!("solve dev {dev:.2e}");
    // inverse
    let inv = m.inv().unwrap();
    let dev: f64 = (&m.dot(&inv) - &Array2::<Complex64>::eye(3)).iter().map(|z| z.norm()).sum();
    println!("inverse dev {dev:.2e}");
}
