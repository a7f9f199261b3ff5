//! Sector-resolved Heisenberg Hamiltonians.
//!
//! A bond `J S_i . S_j` contributes `+J/4` on the diagonal for parallel
//! spins and `-J/4` for antiparallel ones, plus a `J/2` hop to the
//! configuration with both spins flipped.

use crate::error::{Error, Result};
use crate::spin::chain::{Bond, ChainSpec};
use crate::spin::operator::SparseOperator;
use crate::spin::sector::Sector;

/// Heisenberg Hamiltonian for an arbitrary bond list inside one sector.
pub fn build_bond_hamiltonian(bonds: &[Bond], sector: &Sector) -> Result<SparseOperator> {
    let n = sector.n_sites();
    if let Some(b) = bonds.iter().find(|b| b.i >= n || b.j >= n || b.i == b.j) {
        return Err(Error::InvalidSpec(format!(
            "bond ({}, {}) does not fit a {n}-site sector",
            b.i, b.j
        )));
    }
    let rows = sector
        .basis()
        .iter()
        .enumerate()
        .map(|(r, &config)| {
            let mut row = Vec::with_capacity(bonds.len() + 1);
            let mut diag = 0.0;
            for bond in bonds {
                let mask = (1u64 << bond.i) | (1u64 << bond.j);
                let parallel = ((config >> bond.i) ^ (config >> bond.j)) & 1 == 0;
                if parallel {
                    diag += 0.25 * bond.coupling;
                } else {
                    diag -= 0.25 * bond.coupling;
                    let c = sector
                        .index_of(config ^ mask)
                        .expect("spin flip of an antiparallel pair stays in the sector");
                    row.push((c, 0.5 * bond.coupling));
                }
            }
            row.push((r, diag));
            row
        })
        .collect();
    SparseOperator::from_rows(rows)
}

/// Probed chain: `Jp` on the two end bonds, `J` on the interior ones.
pub fn build_chain_hamiltonian(spec: &ChainSpec, sector: &Sector) -> Result<SparseOperator> {
    if spec.gamma.is_some() {
        return Err(Error::Config("chain Hamiltonian takes a spec without gamma".into()));
    }
    if sector.n_sites() != spec.length {
        return Err(Error::Dimension { expected: spec.length, actual: sector.n_sites() });
    }
    build_bond_hamiltonian(&spec.chain_bonds(0), sector)
}

/// Chain plus sender: the sender sits on bit 0, coupled to probe A with `gamma`.
pub fn build_transfer_hamiltonian(spec: &ChainSpec, sector: &Sector) -> Result<SparseOperator> {
    let bonds = spec.transfer_bonds()?;
    if sector.n_sites() != spec.length + 1 {
        return Err(Error::Dimension { expected: spec.length + 1, actual: sector.n_sites() });
    }
    build_bond_hamiltonian(&bonds, sector)
}

/// Map a vector from `from` to the spin-inverted sector `to` (every bit
/// flipped). Heisenberg Hamiltonians are invariant under this map.
pub fn spin_flip(vector: &[f64], from: &Sector, to: &Sector) -> Result<Vec<f64>> {
    if from.n_sites() != to.n_sites() || from.twice_sz() != -to.twice_sz() {
        return Err(Error::InvalidSector { sites: to.n_sites(), twice_sz: to.twice_sz() });
    }
    if vector.len() != from.dim() {
        return Err(Error::Dimension { expected: from.dim(), actual: vector.len() });
    }
    let mask = if from.n_sites() == 64 { u64::MAX } else { (1u64 << from.n_sites()) - 1 };
    let mut out = vec![0.0; to.dim()];
    for (&config, &amp) in from.basis().iter().zip(vector) {
        let idx = to.index_of(config ^ mask).expect("flipped configuration lies in the mirror sector");
        out[idx] = amp;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::dense::dense_spectrum;
    use crate::oracle::{dense_full_hamiltonian, sorted_eigenvalues};
    use crate::spin::sector::enumerate_sector;

    fn all_sectors(n: usize) -> impl Iterator<Item = Sector> {
        (0..=n).map(move |up| enumerate_sector(n, 2 * up as i64 - n as i64).unwrap())
    }

    #[test]
    fn dimer_spectrum_across_sectors() {
        let spec = ChainSpec::dimer(1.3).unwrap();
        let mut energies: Vec<f64> = all_sectors(2)
            .flat_map(|s| dense_spectrum(&build_chain_hamiltonian(&spec, &s).unwrap()).unwrap())
            .collect();
        energies.sort_by(f64::total_cmp);
        let expected = [-0.75 * 1.3, 0.25 * 1.3, 0.25 * 1.3, 0.25 * 1.3];
        for (e, x) in energies.iter().zip(expected) {
            assert!((e - x).abs() < 1e-14, "{e} vs {x}");
        }
    }

    #[test]
    fn four_site_ground_energy_matches_full_space() {
        let spec = ChainSpec::new(4, 1.0, 1.0).unwrap();
        let sector = enumerate_sector(4, 0).unwrap();
        let op = build_chain_hamiltonian(&spec, &sector).unwrap();
        let e0 = dense_spectrum(&op).unwrap()[0];
        let full = sorted_eigenvalues(&dense_full_hamiltonian(4, &spec.chain_bonds(0)));
        assert!((e0 - full[0]).abs() < 1e-12);
    }

    #[test]
    fn transfer_ground_energy_matches_full_space() {
        let spec = ChainSpec::new(4, 1.0, 0.5).unwrap().with_gamma(0.1).unwrap();
        let bonds = spec.transfer_bonds().unwrap();
        let full = sorted_eigenvalues(&dense_full_hamiltonian(5, &bonds));
        let lowest = all_sectors(5)
            .map(|s| dense_spectrum(&build_transfer_hamiltonian(&spec, &s).unwrap()).unwrap()[0])
            .fold(f64::INFINITY, f64::min);
        assert!((lowest - full[0]).abs() < 1e-12);
    }

    #[test]
    fn decoupled_sender_doubles_chain_spectrum() {
        let chain = ChainSpec::new(4, 1.0, 0.7).unwrap();
        let spec = chain.with_gamma(0.0).unwrap();
        let mut with_sender: Vec<f64> = all_sectors(5)
            .flat_map(|s| dense_spectrum(&build_transfer_hamiltonian(&spec, &s).unwrap()).unwrap())
            .collect();
        let mut doubled: Vec<f64> = all_sectors(4)
            .flat_map(|s| dense_spectrum(&build_chain_hamiltonian(&chain, &s).unwrap()).unwrap())
            .flat_map(|e| [e, e])
            .collect();
        with_sender.sort_by(f64::total_cmp);
        doubled.sort_by(f64::total_cmp);
        for (a, b) in with_sender.iter().zip(&doubled) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitian_and_bounded_off_diagonal() {
        let spec = ChainSpec::new(8, 1.0, 0.3).unwrap();
        for sector in all_sectors(8) {
            let op = build_chain_hamiltonian(&spec, &sector).unwrap();
            assert!(op.is_symmetric());
            assert_eq!(op.to_dense(), op.to_dense().transpose());
            for r in 0..op.dim() {
                let config = sector.config(r);
                // only bonds with antiparallel spins can hop
                let bound: f64 = spec
                    .chain_bonds(0)
                    .iter()
                    .filter(|b| ((config >> b.i) ^ (config >> b.j)) & 1 == 1)
                    .map(|b| b.coupling / 2.0)
                    .sum();
                let off: f64 = op.row(r).filter(|&(c, _)| c != r).map(|(_, v)| v.abs()).sum();
                assert!(off <= bound + 1e-15);
            }
        }
    }

    #[test]
    fn full_space_operator_keeps_sector_vectors_in_sector() {
        let spec = ChainSpec::new(4, 1.0, 0.5).unwrap().with_gamma(0.3).unwrap();
        let h = dense_full_hamiltonian(5, &spec.transfer_bonds().unwrap());
        for sector in all_sectors(5) {
            for &config in sector.basis() {
                let column = h.column(config as usize);
                for (idx, &amp) in column.iter().enumerate() {
                    if amp != 0.0 {
                        assert_eq!((idx as u64).count_ones(), config.count_ones());
                    }
                }
            }
        }
    }

    #[test]
    fn sector_matches_full_space_restriction() {
        let spec = ChainSpec::new(6, 1.0, 0.4).unwrap();
        let h = dense_full_hamiltonian(6, &spec.chain_bonds(0));
        let sector = enumerate_sector(6, 2).unwrap();
        let op = build_chain_hamiltonian(&spec, &sector).unwrap().to_dense();
        for (r, &a) in sector.basis().iter().enumerate() {
            for (c, &b) in sector.basis().iter().enumerate() {
                assert!((op[(r, c)] - h[(a as usize, b as usize)]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn mirrored_sectors_share_spectrum() {
        let spec = ChainSpec::new(6, 1.0, 0.25).unwrap();
        for up in 0..3 {
            let plus = enumerate_sector(6, 6 - 2 * up).unwrap();
            let minus = enumerate_sector(6, -(6 - 2 * up)).unwrap();
            let a = dense_spectrum(&build_chain_hamiltonian(&spec, &plus).unwrap()).unwrap();
            let b = dense_spectrum(&build_chain_hamiltonian(&spec, &minus).unwrap()).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spin_flip_preserves_energy_expectation() {
        let spec = ChainSpec::new(6, 1.0, 0.25).unwrap();
        let plus = enumerate_sector(6, 2).unwrap();
        let minus = enumerate_sector(6, -2).unwrap();
        let hp = build_chain_hamiltonian(&spec, &plus).unwrap();
        let hm = build_chain_hamiltonian(&spec, &minus).unwrap();
        let v: Vec<f64> = (0..plus.dim()).map(|k| ((k * 7 % 11) as f64) - 5.0).collect();
        let w = spin_flip(&v, &plus, &minus).unwrap();
        let ep: f64 = v.iter().zip(hp.apply(&v).unwrap()).map(|(a, b)| a * b).sum();
        let em: f64 = w.iter().zip(hm.apply(&w).unwrap()).map(|(a, b)| a * b).sum();
        assert!((ep - em).abs() < 1e-12);
    }

    #[test]
    fn sector_size_mismatch() {
        let spec = ChainSpec::new(4, 1.0, 0.5).unwrap();
        let sector = enumerate_sector(6, 0).unwrap();
        assert!(matches!(build_chain_hamiltonian(&spec, &sector), Err(Error::Dimension { .. })));
        let with_gamma = spec.with_gamma(1.0).unwrap();
        assert!(matches!(build_transfer_hamiltonian(&with_gamma, &sector), Err(Error::Dimension { .. })));
        assert!(matches!(build_transfer_hamiltonian(&spec, &sector), Err(Error::Config(_))));
    }
}
