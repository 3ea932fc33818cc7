use crate::error::{Error, Result};

/// Environment variable that overrides [`Config::max_precision_bits`].
pub const MAX_PRECISION_ENV: &str = "GFIB_MAX_PRECISION_BITS";

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const MIN_PRECISION_BITS: u32 = 8;
pub const DEFAULT_MAX_PRECISION_BITS: u32 = 1_048_576;
pub const DEFAULT_ENUMERATION_CAP: i64 = 30;
/// Longest renewal-mass table accepted by the dynamic program.
pub const MAX_RENEWAL_LENGTH: u64 = 1_000_000;

/// Resource limits shared by every operation that can escalate precision or
/// enumerate exhaustively.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub max_precision_bits: u32,
    pub enumeration_cap: i64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            max_precision_bits: DEFAULT_MAX_PRECISION_BITS,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl Config {
    /// Defaults, with the precision ceiling taken from `GFIB_MAX_PRECISION_BITS`
    /// when it is set to a valid integer.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(bits) = std::env::var(MAX_PRECISION_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
        {
            cfg.max_precision_bits = bits;
        }
        cfg
    }

    pub fn with_max_precision_bits(mut self, bits: u32) -> Self {
        self.max_precision_bits = bits;
        self
    }

    pub fn with_enumeration_cap(mut self, cap: i64) -> Self {
        self.enumeration_cap = cap;
        self
    }

    /// Validates a requested working precision against the floor and ceiling.
    pub fn check_precision(&self, bits: u64) -> Result<u32> {
        if bits < u64::from(MIN_PRECISION_BITS) {
            return Err(Error::PrecisionTooLow {
                requested: bits as u32,
                min: MIN_PRECISION_BITS,
            });
        }
        if bits > u64::from(self.max_precision_bits) {
            return Err(Error::PrecisionCeiling {
                requested: bits,
                max: self.max_precision_bits,
            });
        }
        Ok(bits as u32)
    }
}
