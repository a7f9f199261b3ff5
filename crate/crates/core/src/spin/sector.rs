use crate::error::{Error, Result};

/// Fixed-magnetization basis: every configuration of `n_sites` spins with
/// `(n_sites + twice_sz) / 2` up spins, in ascending bit-pattern order.
/// Bit `i` set means site `i` is up.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    n_sites: usize,
    twice_sz: i64,
    basis: Vec<u64>,
}

impl Sector {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn twice_sz(&self) -> i64 {
        self.twice_sz
    }

    pub fn n_up(&self) -> usize {
        ((self.n_sites as i64 + self.twice_sz) / 2) as usize
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn config(&self, index: usize) -> u64 {
        self.basis[index]
    }

    /// Position of `config` in the basis, by binary search.
    pub fn index_of(&self, config: u64) -> Option<usize> {
        self.basis.binary_search(&config).ok()
    }
}

/// Enumerate all configurations with total magnetization `twice_sz / 2`.
pub fn enumerate_sector(n_sites: usize, twice_sz: i64) -> Result<Sector> {
    let n = n_sites as i64;
    if n_sites == 0 || n_sites > 63 || twice_sz.abs() > n || (n + twice_sz) % 2 != 0 {
        return Err(Error::InvalidSector { sites: n_sites, twice_sz });
    }
    let n_up = ((n + twice_sz) / 2) as u32;
    let dim = binomial(n_sites as u64, n_up as u64) as usize;
    let mut basis = Vec::with_capacity(dim);
    if n_up == 0 {
        basis.push(0);
    } else {
        // Gosper's hack walks same-popcount patterns in ascending order.
        let limit = 1u64 << n_sites;
        let mut c = (1u64 << n_up) - 1;
        while c < limit {
            basis.push(c);
            let lowest = c & c.wrapping_neg();
            let ripple = c + lowest;
            c = (((ripple ^ c) >> 2) / lowest) | ripple;
        }
    }
    debug_assert_eq!(basis.len(), dim);
    Ok(Sector { n_sites, twice_sz, basis })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1)) as u64
}
