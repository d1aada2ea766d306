//! Motion success rates: the probability that the executing agent completes
//! a motion of a given type.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::MotionNode;

/// Errors raised when a rate cannot be produced for a motion.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("no success rate known for motion \"{0}\"")]
    UnknownMotion(String),
    #[error("rate {0} is outside [0, 1]")]
    OutOfRange(f64),
}

/// Per-motion success rates with an optional fallback.
///
/// In strict mode there is no fallback: looking up a motion the table does
/// not know is an error, which surfaces incomplete rate tables instead of
/// silently degrading search behavior.
#[derive(Debug, Clone, Default)]
pub struct MotionRateTable {
    entries: BTreeMap<String, f64>,
    default_rate: Option<f64>,
    strict: bool,
}

impl MotionRateTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or overwrites the rate for a motion. Rates must lie in [0, 1].
    pub fn insert(&mut self, motion: &MotionNode, rate: f64) -> Result<(), RateError> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(RateError::OutOfRange(rate));
        }
        self.entries.insert(motion.name().to_string(), rate);
        Ok(())
    }

    /// Configures a fallback rate for unknown motions and leaves strict mode.
    pub fn with_default(mut self, rate: f64) -> Result<Self, RateError> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(RateError::OutOfRange(rate));
        }
        self.default_rate = Some(rate);
        self.strict = false;
        Ok(self)
    }

    /// Enables strict mode. Any configured fallback is dropped: strict mode
    /// and a default rate are mutually exclusive.
    pub fn strict(mut self) -> Self {
        self.strict = true;
        self.default_rate = None;
        self
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn default_rate(&self) -> Option<f64> {
        self.default_rate
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The stored rate for a motion, ignoring fallback and strictness.
    pub fn stored_rate(&self, motion: &MotionNode) -> Option<f64> {
        self.entries.get(motion.name()).copied()
    }

    /// Resolves a motion's rate. A stored entry wins; otherwise the fallback
    /// applies when configured; otherwise `Ok(None)` in lenient mode and
    /// `Err(UnknownMotion)` in strict mode.
    pub fn rate(&self, motion: &MotionNode) -> Result<Option<f64>, RateError> {
        if let Some(rate) = self.stored_rate(motion) {
            return Ok(Some(rate));
        }
        if let Some(default) = self.default_rate {
            return Ok(Some(default));
        }
        if self.strict {
            return Err(RateError::UnknownMotion(motion.name().to_string()));
        }
        Ok(None)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(name, rate)| (name.as_str(), *rate))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn motion(name: &str) -> MotionNode {
        MotionNode::new(name).unwrap()
    }

    #[test]
    fn stores_and_resolves_rates() {
        let mut table = MotionRateTable::new();
        table.insert(&motion("pour"), 0.9).unwrap();
        table.insert(&motion("chop"), 0.1).unwrap();
        assert_eq!(table.rate(&motion("pour")), Ok(Some(0.9)));
        assert_eq!(table.rate(&motion("chop")), Ok(Some(0.1)));
    }

    #[test]
    fn rejects_out_of_range() {
        let mut table = MotionRateTable::new();
        assert_eq!(table.insert(&motion("pour"), 1.5), Err(RateError::OutOfRange(1.5)));
        assert_eq!(table.insert(&motion("pour"), -0.1), Err(RateError::OutOfRange(-0.1)));
        assert!(table.insert(&motion("pour"), 0.0).is_ok());
        assert!(table.insert(&motion("pour"), 1.0).is_ok());
    }

    #[test]
    fn strict_mode_errors_on_unknown_motion() {
        let table = MotionRateTable::new().strict();
        assert_eq!(
            table.rate(&motion("whisk")),
            Err(RateError::UnknownMotion("whisk".to_string()))
        );
    }

    #[test]
    fn lenient_mode_returns_none_or_default() {
        let table = MotionRateTable::new();
        assert_eq!(table.rate(&motion("whisk")), Ok(None));
        let table = table.with_default(0.5).unwrap();
        assert_eq!(table.rate(&motion("whisk")), Ok(Some(0.5)));
    }

    #[test]
    fn strict_drops_default() {
        let table = MotionRateTable::new().with_default(0.5).unwrap().strict();
        assert!(table.is_strict());
        assert_eq!(table.default_rate(), None);
    }
}
