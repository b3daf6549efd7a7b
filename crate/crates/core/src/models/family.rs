use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::ModelBundle;
use crate::error::Result;
use crate::par::Exec;
use crate::polygauss::PolyGaussFun;
use crate::weyl::WeylOp;

/// Biorthogonal families `φ_{n₁,n₂}`, `Ψ_{n₁,n₂}` for `n₁ + n₂ ≤ nmax`.
#[derive(Clone, Debug)]
pub struct LadderFamily {
    pub nmax: usize,
    pub phi: BTreeMap<(usize, usize), PolyGaussFun>,
    pub psi: BTreeMap<(usize, usize), PolyGaussFun>,
}

impl LadderFamily {
    /// Indices in level order, `(0,0), (0,1), (1,0), (0,2), …`.
    pub fn indices(&self) -> Vec<(usize, usize)> {
        triangle(self.nmax)
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }
}

/// All `(n₁, n₂)` with `n₁ + n₂ ≤ nmax`, by level then by `n₁`.
pub fn triangle(nmax: usize) -> Vec<(usize, usize)> {
    (0..=nmax).flat_map(|level| (0..=level).map(move |n1| (n1, level - n1))).collect()
}

pub fn generate_family(bundle: &ModelBundle, nmax: usize) -> Result<LadderFamily> {
    generate_family_with(bundle, nmax, Exec::default())
}

/// `φ_{n₁,n₂} = b₁^{n₁} b₂^{n₂} φ₀₀ / √(n₁! n₂!)` and
/// `Ψ_{n₁,n₂} = (a₁†)^{n₁} (a₂†)^{n₂} Ψ₀₀ / √(n₁! n₂!)`, built one raising
/// step at a time. Rows of fixed `n₂` are independent and run under `exec`.
pub fn generate_family_with(bundle: &ModelBundle, nmax: usize, exec: Exec) -> Result<LadderFamily> {
    let a_dag = bundle.a_dagger();
    let phi = ladder_table(&bundle.vacuum_phi, &bundle.b, nmax, exec)?;
    let psi = ladder_table(&bundle.vacuum_psi, &a_dag, nmax, exec)?;
    Ok(LadderFamily { nmax, phi, psi })
}

fn raise(op: &WeylOp, f: &PolyGaussFun, n: usize) -> Result<PolyGaussFun> {
    Ok(op.apply(f)?.scale(C64::new(1.0 / (n as f64).sqrt(), 0.0)))
}

pub(crate) fn ladder_table(
    vacuum: &PolyGaussFun,
    raising: &[WeylOp; 2],
    nmax: usize,
    exec: Exec,
) -> Result<BTreeMap<(usize, usize), PolyGaussFun>> {
    let mut column = vec![vacuum.clone()];
    for n2 in 1..=nmax {
        let next = raise(&raising[1], &column[n2 - 1], n2)?;
        column.push(next);
    }
    let starts: Vec<(usize, PolyGaussFun)> = column.into_iter().enumerate().collect();
    let rows = exec.try_map(&starts, |(n2, start)| {
        let mut row = vec![start.clone()];
        for n1 in 1..=nmax - n2 {
            let next = raise(&raising[0], &row[n1 - 1], n1)?;
            row.push(next);
        }
        Ok::<_, crate::PbError>(row)
    })?;
    let mut table = BTreeMap::new();
    for (n2, row) in rows.into_iter().enumerate() {
        for (n1, f) in row.into_iter().enumerate() {
            table.insert((n1, n2), f);
        }
    }
    Ok(table)
}
