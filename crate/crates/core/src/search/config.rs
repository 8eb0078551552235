use std::collections::BTreeSet;

use crate::calculus::{RuleId, System};

/// Invertible propositional rules, then eigen rules, then rules that need
/// a witness, then the structural rules (which the prover uses only for
/// closing and contracting).
pub const DEFAULT_RULE_ORDER: &[RuleId] = &[
    RuleId::AndL,
    RuleId::OrR,
    RuleId::ImpR,
    RuleId::NegL,
    RuleId::NegR,
    RuleId::AndR,
    RuleId::OrL,
    RuleId::ImpL,
    RuleId::IffL,
    RuleId::IffR,
    RuleId::LamL,
    RuleId::LamR,
    RuleId::AllR,
    RuleId::ExL,
    RuleId::All2R,
    RuleId::Ex2L,
    RuleId::Eq2R,
    RuleId::Iota1L,
    RuleId::Iota1L2,
    RuleId::AllL,
    RuleId::ExR,
    RuleId::All2L,
    RuleId::Ex2R,
    RuleId::Eq2L,
    RuleId::EqMinus,
    RuleId::EqPlus,
    RuleId::IotaR,
    RuleId::Iota2L,
    RuleId::IotaR2,
    RuleId::Iota2L2,
    RuleId::Ax,
    RuleId::WL,
    RuleId::WR,
    RuleId::CL,
    RuleId::CR,
];

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SearchConfig {
    pub max_depth: usize,
    /// How often one formula may be kept by contraction on a branch.
    pub max_contractions_per_formula: usize,
    /// Fresh parameters tried beyond those of the branch.
    pub instantiation_pool_extra: usize,
    pub rule_order: Vec<RuleId>,
    pub time_budget_ms: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 12,
            max_contractions_per_formula: 2,
            instantiation_pool_extra: 1,
            rule_order: DEFAULT_RULE_ORDER.to_vec(),
            time_budget_ms: 10_000,
        }
    }
}

impl SearchConfig {
    pub fn with_depth(max_depth: usize) -> Self {
        SearchConfig {
            max_depth,
            ..SearchConfig::default()
        }
    }

    /// Sets one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let num = |v: &str| v.parse::<u64>().map_err(|_| format!("`{key}` needs a number, got `{v}`"));
        match key {
            "max_depth" | "depth" => self.max_depth = num(value)? as usize,
            "max_contractions_per_formula" => self.max_contractions_per_formula = num(value)? as usize,
            "instantiation_pool_extra" | "pool" => self.instantiation_pool_extra = num(value)? as usize,
            "time_budget_ms" => self.time_budget_ms = num(value)?,
            "rule_order" => {
                self.rule_order = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::parse)
                    .collect::<Result<_, _>>()?
            }
            _ => return Err(format!("unknown setting `{key}`")),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_config_str(src: &str) -> Result<Self, String> {
        let mut cfg = SearchConfig::default();
        cfg.apply_config_str(src)?;
        Ok(cfg)
    }

    pub fn apply_config_str(&mut self, src: &str) -> Result<(), String> {
        for (i, line) in src.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
            self.set(k.trim(), v.trim()).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(())
    }

    /// `max_depth ≥ 1` and `rule_order` lists every non-Cut rule of the
    /// system once (second-order rules may stay in a first-order order).
    pub fn validate(&self, system: System) -> Result<(), String> {
        if self.max_depth == 0 {
            return Err("max_depth must be at least 1".into());
        }
        let listed: BTreeSet<RuleId> = self.rule_order.iter().copied().collect();
        if listed.len() != self.rule_order.len() {
            return Err("rule_order lists a rule twice".into());
        }
        if listed.contains(&RuleId::Cut) {
            return Err("rule_order may not contain Cut".into());
        }
        let missing: Vec<&str> = RuleId::ALL
            .iter()
            .filter(|r| **r != RuleId::Cut && (system == System::RL2 || !r.is_second_order()))
            .filter(|r| !listed.contains(r))
            .map(|r| r.name())
            .collect();
        if !missing.is_empty() {
            return Err(format!("rule_order is missing {}", missing.join(", ")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_order_is_a_permutation() {
        assert!(SearchConfig::default().validate(System::RL2).is_ok());
        assert!(SearchConfig::default().validate(System::RL).is_ok());
        assert_eq!(DEFAULT_RULE_ORDER.len(), RuleId::ALL.len() - 1);
    }

    #[test]
    fn config_file() {
        let cfg = SearchConfig::from_config_str("max_depth = 5 # shallow\n\npool = 2\ntime_budget_ms=100").unwrap();
        assert_eq!(cfg.max_depth, 5);
        assert_eq!(cfg.instantiation_pool_extra, 2);
        assert_eq!(cfg.time_budget_ms, 100);
        assert!(SearchConfig::from_config_str("depth: 3").is_err());
        assert!(SearchConfig::from_config_str("colour = 3").is_err());
        let mut cfg = SearchConfig::default();
        cfg.set("rule_order", "AX, Cut").unwrap();
        assert!(cfg.validate(System::RL).is_err());
        cfg.max_depth = 0;
        assert!(cfg.validate(System::RL).is_err());
    }
}
