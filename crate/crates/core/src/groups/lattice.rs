//! Integer lattices in Z^n: Hermite and Smith normal forms, saturation, spans.

use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub type IntVec = Vec<i64>;

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// True iff the gcd of the entries is 1.
pub fn is_primitive(v: &[i64]) -> Result<bool> {
    if v.iter().all(|&x| x == 0) {
        return Err(Error::DegenerateSlope);
    }
    Ok(gcd_all(v) == 1)
}

/// Flip sign so the first nonzero entry is positive.
pub fn sign_normalize(v: &[i64]) -> IntVec {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.iter().map(|&y| -y).collect(),
        _ => v.to_vec(),
    }
}

fn check_len(rows: &[IntVec], n: usize) -> Result<()> {
    for r in rows {
        if r.len() != n {
            return Err(Error::RankMismatch { expected: n, found: r.len() });
        }
    }
    Ok(())
}

fn axpy(target: &mut [i64], q: i64, src: &[i64]) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Row-style Hermite reduction keeping every row, with the unimodular transform `u` such that
/// `u * rows = h`. Zero rows end up at the bottom.
pub fn hnf_with_transform(rows: &[IntVec], n: usize) -> (Vec<IntVec>, Vec<IntVec>) {
    let m = rows.len();
    let mut h = rows.to_vec();
    let mut u: Vec<IntVec> = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        loop {
            let piv = (r..m).filter(|&i| h[i][col] != 0).min_by_key(|&i| h[i][col].abs());
            let Some(p) = piv else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..m {
                let q = h[i][col] / h[r][col];
                if q != 0 {
                    let (hr, ur) = (h[r].clone(), u[r].clone());
                    axpy(&mut h[i], q, &hr);
                    axpy(&mut u[i], q, &ur);
                }
                if h[i][col] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[r][col] == 0 {
            continue;
        }
        if h[r][col] < 0 {
            h[r].iter_mut().for_each(|x| *x = -*x);
            u[r].iter_mut().for_each(|x| *x = -*x);
        }
        let (hr, ur) = (h[r].clone(), u[r].clone());
        for i in 0..r {
            let q = Integer::div_floor(&h[i][col], &hr[col]);
            if q != 0 {
                axpy(&mut h[i], q, &hr);
                axpy(&mut u[i], q, &ur);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Hermite normal form with zero rows dropped: echelon, positive pivots, entries above a pivot
/// reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[IntVec], n: usize) -> Result<Vec<IntVec>> {
    check_len(rows, n)?;
    let (h, _) = hnf_with_transform(rows, n);
    Ok(h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect())
}

/// Basis of `{x in Z^n : rows . x = 0}`.
pub fn integer_kernel(rows: &[IntVec], n: usize) -> Result<Vec<IntVec>> {
    check_len(rows, n)?;
    let m = rows.len();
    let t: Vec<IntVec> = (0..n).map(|j| (0..m).map(|i| rows[i][j]).collect()).collect();
    let (h, u) = hnf_with_transform(&t, m);
    Ok(h.iter().zip(u).filter(|(hr, _)| hr.iter().all(|&x| x == 0)).map(|(_, ur)| ur).collect())
}

/// Nonzero invariant factors of the integer matrix, in divisibility order.
pub fn smith_diagonal(rows: &[IntVec], n: usize) -> Result<Vec<i64>> {
    check_len(rows, n)?;
    let mut a = rows.to_vec();
    let m = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let piv = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = piv else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut changed = false;
            for i in t + 1..m {
                let q = a[i][t] / p;
                if q != 0 {
                    let at = a[t].clone();
                    axpy(&mut a[i], q, &at);
                }
                if a[i][t] != 0 {
                    changed = true;
                }
            }
            for j in t + 1..n {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut() {
                        let v = row[t];
                        row[j] -= q * v;
                    }
                }
                if a[t][j] != 0 {
                    changed = true;
                }
            }
            if !changed {
                // divisibility: every remaining entry must be a multiple of the pivot
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        let ai = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(ai) {
                            *x += y;
                        }
                    }
                    None => break,
                }
            }
            // restart with the smallest entry in row/column t
            let best_r = (t..m).filter(|&i| a[i][t] != 0).min_by_key(|&i| a[i][t].abs());
            let best_c = (t..n).filter(|&j| a[t][j] != 0).min_by_key(|&j| a[t][j].abs());
            match (best_r, best_c) {
                (Some(i), Some(j)) => {
                    if a[i][t].abs() <= a[t][j].abs() {
                        a.swap(t, i);
                    } else {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                }
                (Some(i), None) => a.swap(t, i),
                (None, Some(j)) => {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                }
                (None, None) => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

/// A sublattice of Z^n stored by its Hermite normal form, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    pub ambient: usize,
    pub basis: Vec<IntVec>,
}

impl Lattice {
    pub fn span(vectors: &[IntVec], n: usize) -> Result<Self> {
        Ok(Lattice { ambient: n, basis: hermite_normal_form(vectors, n)? })
    }

    pub fn full(n: usize) -> Self {
        let basis = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Lattice { ambient: n, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut w = v.to_vec();
        for row in &self.basis {
            let c = row.iter().position(|&x| x != 0).expect("nonzero basis row");
            if w[c] % row[c] != 0 {
                return false;
            }
            let q = w[c] / row[c];
            axpy(&mut w, q, row);
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn saturation(&self) -> Lattice {
        saturate(&self.basis, self.ambient).expect("lengths already checked")
    }
}

/// Saturation of the span: `(span ⊗ Q) ∩ Z^n`.
pub fn saturate(vectors: &[IntVec], n: usize) -> Result<Lattice> {
    let k = integer_kernel(vectors, n)?;
    let s = integer_kernel(&k, n)?;
    Lattice::span(&s, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpan {
    pub rank: usize,
    pub span: Lattice,
    pub saturation: Lattice,
    /// Index of the raw span inside its saturation.
    pub index: i64,
}

pub fn lattice_span(vectors: &[IntVec], n: usize) -> Result<LatticeSpan> {
    let span = Lattice::span(vectors, n)?;
    let saturation = saturate(vectors, n)?;
    let index = smith_diagonal(vectors, n)?.iter().product();
    Ok(LatticeSpan { rank: span.rank(), span, saturation, index })
}

/// Integer coefficients `x` with `sum x_i gens_i = v`, if any.
pub fn integer_coordinates(gens: &[IntVec], v: &[i64]) -> Option<IntVec> {
    let n = v.len();
    if gens.iter().any(|g| g.len() != n) {
        return None;
    }
    let (h, u) = hnf_with_transform(gens, n);
    let mut w = v.to_vec();
    let mut y = vec![0i64; gens.len()];
    for (i, row) in h.iter().enumerate() {
        let Some(c) = row.iter().position(|&x| x != 0) else { break };
        if w[c] % row[c] != 0 {
            return None;
        }
        y[i] = w[c] / row[c];
        axpy(&mut w, y[i], row);
    }
    if w.iter().any(|&x| x != 0) {
        return None;
    }
    let mut x = vec![0i64; gens.len()];
    for (i, yi) in y.iter().enumerate() {
        for (xj, uij) in x.iter_mut().zip(&u[i]) {
            *xj += yi * uij;
        }
    }
    Some(x)
}

pub fn det2(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}
