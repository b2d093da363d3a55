use crate::error::{Error, Result};

/// Default number of elementary work units (tree nodes, pairings, word
/// evaluations) a single call may consume. Sized so that the semi-meander
/// table reaches order 16 and the meander polynomial order 9.
pub const DEFAULT_MAX_WORK: u64 = 100_000_000;

/// Environment variable that overrides [`DEFAULT_MAX_WORK`].
pub const MAX_WORK_ENV: &str = "MEANDRICS_MAX_WORK";

/// Budget guarding enumerations whose size grows super-exponentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkLimit {
    max_work: u64,
}

impl WorkLimit {
    pub fn new(max_work: u64) -> Result<Self> {
        if max_work == 0 {
            return Err(Error::InvalidInput("work limit must be positive".into()));
        }
        Ok(Self { max_work })
    }

    pub fn unlimited() -> Self {
        Self { max_work: u64::MAX }
    }

    /// Reads [`MAX_WORK_ENV`] and falls back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_WORK_ENV) {
            Ok(v) => {
                let n: u64 = v.trim().parse().map_err(|_| {
                    Error::InvalidInput(format!("{MAX_WORK_ENV}={v:?} is not a positive integer"))
                })?;
                Self::new(n)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn max_work(&self) -> u64 {
        self.max_work
    }

    pub fn allows(&self, needed: u128) -> bool {
        needed <= self.max_work as u128
    }

    pub fn check(&self, what: &str, needed: u128) -> Result<()> {
        if self.allows(needed) {
            Ok(())
        } else {
            Err(Error::ResourceLimit {
                what: what.to_string(),
                needed,
                limit: self.max_work,
            })
        }
    }
}

impl Default for WorkLimit {
    fn default() -> Self {
        Self {
            max_work: DEFAULT_MAX_WORK,
        }
    }
}
