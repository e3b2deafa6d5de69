use crate::error::{Error, Result};
use std::fmt;

/// Which configurations a [`FockBasis`] admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// spin-1/2 (or spinless fermion) states with exactly `N` set bits
    NumberSector(usize),
    /// no two adjacent set bits, including the `(L-1, 0)` bond
    BlockadePbc,
    /// no two adjacent set bits on an open chain
    BlockadeObc,
    FullSpinHalf,
    /// two bits per site: 0 -> m=-1, 1 -> m=0, 2 -> m=+1
    FullSpinOne,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::NumberSector(n) => write!(f, "number-sector(N={n})"),
            Constraint::BlockadePbc => write!(f, "blockade-pbc"),
            Constraint::BlockadeObc => write!(f, "blockade-obc"),
            Constraint::FullSpinHalf => write!(f, "spin-half"),
            Constraint::FullSpinOne => write!(f, "spin-one"),
        }
    }
}

const MAX_SITES: usize = 32;
const MAX_DIM: u128 = 1 << 26;

/// Ordered, bit-encoded many-body configurations of one sector.
#[derive(Debug, Clone)]
pub struct FockBasis {
    sites: usize,
    constraint: Constraint,
    states: Vec<u64>,
}

impl FockBasis {
    pub fn build(sites: usize, constraint: Constraint) -> Result<Self> {
        if sites == 0 || sites > MAX_SITES {
            return Err(Error::invalid(format!("basis needs 1..={MAX_SITES} sites, got {sites}")));
        }
        let estimate: u128 = match constraint {
            Constraint::NumberSector(n) => {
                if n > sites {
                    return Err(Error::invalid(format!("N = {n} exceeds L = {sites}")));
                }
                binomial(sites, n)
            }
            Constraint::FullSpinOne => 3u128.pow(sites as u32),
            // Fibonacci growth is bounded by 2^L
            _ => fibonacci_bound(sites, constraint),
        };
        if estimate > MAX_DIM {
            return Err(Error::invalid(format!("{constraint} basis on {sites} sites is too large ({estimate} states)")));
        }
        let states = match constraint {
            Constraint::NumberSector(n) => number_sector(sites, n),
            Constraint::BlockadeObc => blockade(sites, false),
            Constraint::BlockadePbc => blockade(sites, true),
            Constraint::FullSpinHalf => (0..1u64 << sites).collect(),
            Constraint::FullSpinOne => spin_one(sites),
        };
        Ok(FockBasis { sites, constraint, states })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn state(&self, i: usize) -> u64 {
        self.states[i]
    }

    pub fn index(&self, config: u64) -> Option<usize> {
        self.states.binary_search(&config).ok()
    }

    pub fn bits_per_site(&self) -> usize {
        match self.constraint {
            Constraint::FullSpinOne => 2,
            _ => 1,
        }
    }

    pub fn is_spin_one(&self) -> bool {
        self.constraint == Constraint::FullSpinOne
    }

    /// Local state code of `site` (0/1 for spin-1/2, 0/1/2 for spin-1).
    #[inline]
    pub fn local(&self, config: u64, site: usize) -> u64 {
        let b = self.bits_per_site();
        (config >> (b * site)) & ((1 << b) - 1)
    }

    #[inline]
    pub fn with_local(&self, config: u64, site: usize, value: u64) -> u64 {
        let b = self.bits_per_site();
        let mask = ((1u64 << b) - 1) << (b * site);
        (config & !mask) | (value << (b * site))
    }

    /// True if `config` belongs to this sector.
    pub fn admits(&self, config: u64) -> bool {
        self.index(config).is_some()
    }

    /// Site 0 first, e.g. `"1010"` for a Neel state on four sites.
    pub fn bitstring(&self, config: u64) -> String {
        (0..self.sites)
            .map(|j| match self.local(config, j) {
                0 if self.is_spin_one() => '-',
                1 if self.is_spin_one() => '0',
                2 => '+',
                v => char::from_digit(v as u32, 10).unwrap_or('?'),
            })
            .collect()
    }

    /// Parse a site-0-first string of `0`/`1` (or `-`/`0`/`+` for spin-1).
    pub fn parse(&self, s: &str) -> Result<u64> {
        if s.chars().count() != self.sites {
            return Err(Error::invalid(format!("configuration '{s}' does not have {} sites", self.sites)));
        }
        let mut config = 0u64;
        for (j, c) in s.chars().enumerate() {
            let v = match (self.is_spin_one(), c) {
                (false, '0') => 0,
                (false, '1') => 1,
                (true, '-') => 0,
                (true, '0') => 1,
                (true, '+') => 2,
                _ => return Err(Error::invalid(format!("bad site character '{c}' in '{s}'"))),
            };
            config = self.with_local(config, j, v);
        }
        if !self.admits(config) {
            return Err(Error::invalid(format!("configuration '{s}' is outside the {} sector", self.constraint)));
        }
        Ok(config)
    }

    /// Normalised basis vector for a configuration.
    pub fn product_state(&self, config: u64) -> Result<Vec<crate::C64>> {
        let i = self
            .index(config)
            .ok_or_else(|| Error::invalid(format!("configuration {config:#b} is outside the sector")))?;
        let mut v = vec![crate::C64::new(0.0, 0.0); self.dim()];
        v[i] = crate::C64::new(1.0, 0.0);
        Ok(v)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn fibonacci_bound(sites: usize, constraint: Constraint) -> u128 {
    match constraint {
        Constraint::FullSpinHalf => 1u128 << sites,
        _ => {
            let (mut a, mut b) = (1u128, 2u128);
            for _ in 1..sites {
                let c = a + b;
                a = b;
                b = c;
            }
            b
        }
    }
}

fn number_sector(sites: usize, n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![0];
    }
    let mut out = Vec::with_capacity(binomial(sites, n) as usize);
    let mut v: u64 = (1u64 << n) - 1;
    let limit = 1u64 << sites;
    while v < limit {
        out.push(v);
        // Gosper's hack: next integer with the same popcount
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

fn blockade(sites: usize, periodic: bool) -> Vec<u64> {
    let mut out = Vec::new();
    // descend from the most significant site, trying 0 before 1, so the output is ascending
    fn rec(site: isize, prev_set: bool, acc: u64, sites: usize, periodic: bool, out: &mut Vec<u64>) {
        if site < 0 {
            let wrap = periodic && sites > 1 && (acc & 1) == 1 && (acc >> (sites - 1)) & 1 == 1;
            if !wrap {
                out.push(acc);
            }
            return;
        }
        rec(site - 1, false, acc, sites, periodic, out);
        if !prev_set {
            rec(site - 1, true, acc | (1u64 << site), sites, periodic, out);
        }
    }
    rec(sites as isize - 1, false, 0, sites, periodic, &mut out);
    out
}

fn spin_one(sites: usize) -> Vec<u64> {
    let total = 3usize.pow(sites as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut config = 0u64;
        for j in 0..sites {
            config |= ((code % 3) as u64) << (2 * j);
            code /= 3;
        }
        out.push(config);
    }
    out.sort_unstable();
    out
}
