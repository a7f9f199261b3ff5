use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exchange bond `J S_i . S_j` between two bit positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub coupling: f64,
}

impl Bond {
    pub fn new(i: usize, j: usize, coupling: f64) -> Self {
        Bond { i, j, coupling }
    }
}

/// Geometry and couplings of an open chain whose end sites (the probes
/// A and B) couple to the interior with `jp`.
///
/// Sites are numbered `1..=length`; site `i` lives on bit `i - 1` of a
/// chain configuration. When a sender is attached it occupies bit 0 and
/// the chain is shifted up by one bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub length: usize,
    pub j: f64,
    pub jp: f64,
    pub gamma: Option<f64>,
}

impl ChainSpec {
    pub fn new(length: usize, j: f64, jp: f64) -> Result<Self> {
        if length < 4 || length % 2 != 0 {
            return Err(Error::InvalidSpec(format!(
                "chain length must be even and at least 4, got {length}"
            )));
        }
        check_coupling("J", j)?;
        check_coupling("Jp", jp)?;
        Ok(ChainSpec { length, j, jp, gamma: None })
    }

    /// Two spins joined by a single bond `j`. Only used as a reference
    /// system with a known spectrum.
    pub fn dimer(j: f64) -> Result<Self> {
        check_coupling("J", j)?;
        Ok(ChainSpec { length: 2, j, jp: j, gamma: None })
    }

    /// Attach a sender spin coupled to probe A with strength `gamma`.
    /// `gamma = 0` is allowed and gives a decoupled sender.
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidSpec(format!("gamma must be finite and >= 0, got {gamma}")));
        }
        self.gamma = Some(gamma);
        Ok(self)
    }

    pub fn without_gamma(mut self) -> Self {
        self.gamma = None;
        self
    }

    pub fn is_dimer(&self) -> bool {
        self.length == 2
    }

    /// Bonds of the probed chain with site 1 placed on bit `offset`.
    pub fn chain_bonds(&self, offset: usize) -> Vec<Bond> {
        if self.is_dimer() {
            return vec![Bond::new(offset, offset + 1, self.j)];
        }
        let last = self.length - 2;
        (0..self.length - 1)
            .map(|k| {
                let coupling = if k == 0 || k == last { self.jp } else { self.j };
                Bond::new(offset + k, offset + k + 1, coupling)
            })
            .collect()
    }

    /// Chain bonds shifted by one bit plus the sender bond on bits (0, 1).
    pub fn transfer_bonds(&self) -> Result<Vec<Bond>> {
        let gamma = self
            .gamma
            .ok_or_else(|| Error::Config("transfer Hamiltonian requires a sender coupling gamma".into()))?;
        let mut bonds = vec![Bond::new(0, 1, gamma)];
        bonds.extend(self.chain_bonds(1));
        Ok(bonds)
    }

    /// Bit positions of probes A and B inside a chain configuration
    /// (`offset = 1` when the sender occupies bit 0).
    pub fn probe_bits(&self, offset: usize) -> (usize, usize) {
        (offset, offset + self.length - 1)
    }
}

fn check_coupling(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} must be finite and positive, got {value}")))
    }
}
