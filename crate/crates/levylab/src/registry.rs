//! Registry of defined predicates: assigned hierarchy classes, absoluteness
//! flags, and optional finite-model evaluators.
//!
//! Defined atoms carry an assigned class rather than a definition; known
//! complexities of standard notions (ordinal arithmetic, constructibility
//! membership, and so on) are recorded here instead of being expanded.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::ast::is_identifier;
use crate::levy::LevyClass;

/// Built-in finite-model semantics a registry entry may point at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinEval {
    /// Every element is a finite sequence of ordinals (a set of tuples of
    /// ordinals, sequences coded as functions on a von Neumann natural).
    OrdTupleSet,
    /// Von Neumann ordinal.
    Ord,
    /// `FuncInto(f, a, b)`: f is a function from a into b.
    FuncInto,
    /// `Omega(x)`: x is the first infinite ordinal — false in every finite model.
    Omega,
}

impl BuiltinEval {
    pub fn arity(&self) -> usize {
        match self {
            BuiltinEval::FuncInto => 3,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinEval::OrdTupleSet => "OrdTupleSet",
            BuiltinEval::Ord => "Ord",
            BuiltinEval::FuncInto => "FuncInto",
            BuiltinEval::Omega => "Omega",
        }
    }
}

impl FromStr for BuiltinEval {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<BuiltinEval, RegistryError> {
        match s {
            "OrdTupleSet" => Ok(BuiltinEval::OrdTupleSet),
            "Ord" => Ok(BuiltinEval::Ord),
            "FuncInto" => Ok(BuiltinEval::FuncInto),
            "Omega" => Ok(BuiltinEval::Omega),
            other => Err(RegistryError::UnknownEvaluator(other.to_string())),
        }
    }
}

/// A defined predicate: its arity, assigned class, absoluteness flags, and
/// optional evaluator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateInfo {
    name: String,
    arity: usize,
    assigned_class: LevyClass,
    upwards_absolute: bool,
    downwards_absolute: bool,
    evaluator: Option<BuiltinEval>,
}

impl PredicateInfo {
    /// Builds an entry. Δ₀ entries are absolute in both directions by
    /// definition, so both flags are forced on for them.
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        assigned_class: LevyClass,
        upwards_absolute: bool,
        downwards_absolute: bool,
        evaluator: Option<BuiltinEval>,
    ) -> Result<PredicateInfo, RegistryError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(RegistryError::InvalidName(name));
        }
        if let Some(eval) = evaluator {
            if eval.arity() != arity {
                return Err(RegistryError::EvaluatorArityMismatch {
                    name,
                    arity,
                    evaluator: eval.name(),
                    evaluator_arity: eval.arity(),
                });
            }
        }
        let delta0 = assigned_class == LevyClass::DELTA0;
        Ok(PredicateInfo {
            name,
            arity,
            assigned_class,
            upwards_absolute: upwards_absolute || delta0,
            downwards_absolute: downwards_absolute || delta0,
            evaluator,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn assigned_class(&self) -> LevyClass {
        self.assigned_class
    }

    pub fn upwards_absolute(&self) -> bool {
        self.upwards_absolute
    }

    pub fn downwards_absolute(&self) -> bool {
        self.downwards_absolute
    }

    pub fn evaluator(&self) -> Option<BuiltinEval> {
        self.evaluator
    }
}

/// Errors raised while building or extending a registry.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("`{0}` is not a valid predicate name")]
    InvalidName(String),
    #[error("entry `{0}` would shadow a built-in predicate")]
    ShadowsBuiltin(String),
    #[error("duplicate registry entry `{0}`")]
    Duplicate(String),
    #[error("unknown evaluator `{0}`")]
    UnknownEvaluator(String),
    #[error("`{name}`/{arity} names evaluator {evaluator} of arity {evaluator_arity}")]
    EvaluatorArityMismatch {
        name: String,
        arity: usize,
        evaluator: &'static str,
        evaluator_arity: usize,
    },
    #[error("malformed registry line `{line}`: {reason}")]
    MalformedLine { line: String, reason: String },
}

/// The predicate registry. Ships with the immutable built-ins `OrdTupleSet/1`,
/// `Ord/1`, `FuncInto/3`, and `Omega/1`, all Δ₀ and absolute both ways.
#[derive(Debug, Clone)]
pub struct Registry {
    entries: BTreeMap<String, PredicateInfo>,
    builtin_count: usize,
}

pub const BUILTIN_NAMES: &[&str] = &["OrdTupleSet", "Ord", "FuncInto", "Omega"];

impl Registry {
    /// A registry holding exactly the built-ins.
    pub fn with_builtins() -> Registry {
        let mut entries = BTreeMap::new();
        for eval in [
            BuiltinEval::OrdTupleSet,
            BuiltinEval::Ord,
            BuiltinEval::FuncInto,
            BuiltinEval::Omega,
        ] {
            let info = PredicateInfo::new(
                eval.name(),
                eval.arity(),
                LevyClass::DELTA0,
                true,
                true,
                Some(eval),
            )
            .expect("builtin entry is valid");
            entries.insert(eval.name().to_string(), info);
        }
        let builtin_count = entries.len();
        Registry {
            entries,
            builtin_count,
        }
    }

    pub fn get(&self, name: &str) -> Option<&PredicateInfo> {
        self.entries.get(name)
    }

    pub fn is_builtin(name: &str) -> bool {
        BUILTIN_NAMES.contains(&name)
    }

    /// Adds a user entry. Built-ins can be neither shadowed nor redefined,
    /// and user entries must be unique.
    pub fn register(&mut self, info: PredicateInfo) -> Result<(), RegistryError> {
        if Registry::is_builtin(info.name()) {
            return Err(RegistryError::ShadowsBuiltin(info.name().to_string()));
        }
        if self.entries.contains_key(info.name()) {
            return Err(RegistryError::Duplicate(info.name().to_string()));
        }
        self.entries.insert(info.name().to_string(), info);
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = &PredicateInfo> {
        self.entries.values()
    }

    pub fn user_entry_count(&self) -> usize {
        self.entries.len() - self.builtin_count
    }

    /// Parses one registry-file line:
    /// `name/arity class=<Delta0|Sigma<n>|Pi<n>|Delta<n>> [up] [down] [eval=<builtin-name>]`.
    /// Blank lines and `#` comments yield `None`. Unknown flags are errors.
    pub fn parse_line(line: &str) -> Result<Option<PredicateInfo>, RegistryError> {
        let text = match line.find('#') {
            Some(idx) => &line[..idx],
            None => line,
        };
        let text = text.trim();
        if text.is_empty() {
            return Ok(None);
        }
        let err = |reason: &str| RegistryError::MalformedLine {
            line: line.to_string(),
            reason: reason.to_string(),
        };
        let mut fields = text.split_whitespace();
        let head = fields.next().ok_or_else(|| err("missing name/arity"))?;
        let (name, arity) = head
            .split_once('/')
            .ok_or_else(|| err("expected `name/arity`"))?;
        let arity: usize = arity
            .parse()
            .map_err(|_| err("arity is not a nonnegative integer"))?;

        let mut class: Option<LevyClass> = None;
        let mut up = false;
        let mut down = false;
        let mut evaluator: Option<BuiltinEval> = None;
        for field in fields {
            if let Some(value) = field.strip_prefix("class=") {
                if class.is_some() {
                    return Err(err("duplicate class= field"));
                }
                class = Some(
                    value
                        .parse::<LevyClass>()
                        .map_err(|e| err(&e.to_string()))?,
                );
            } else if let Some(value) = field.strip_prefix("eval=") {
                if evaluator.is_some() {
                    return Err(err("duplicate eval= field"));
                }
                if value == "none" {
                    continue;
                }
                evaluator = Some(value.parse()?);
            } else if field == "up" {
                up = true;
            } else if field == "down" {
                down = true;
            } else {
                return Err(err(&format!("unknown flag `{field}`")));
            }
        }
        let class = class.ok_or_else(|| err("missing class= field"))?;
        PredicateInfo::new(name, arity, class, up, down, evaluator).map(Some)
    }

    /// Parses a whole registry file and merges the entries in.
    pub fn load_str(&mut self, text: &str) -> Result<(), RegistryError> {
        for line in text.lines() {
            if let Some(info) = Registry::parse_line(line)? {
                self.register(info)?;
            }
        }
        Ok(())
    }

    /// Renders the user entries back in the file format.
    pub fn render_user_entries(&self) -> String {
        let mut out = String::new();
        for info in self.entries.values() {
            if Registry::is_builtin(info.name()) {
                continue;
            }
            out.push_str(&format!("{}/{}", info.name(), info.arity()));
            out.push_str(&format!(" class={}", info.assigned_class()));
            if info.upwards_absolute() {
                out.push_str(" up");
            }
            if info.downwards_absolute() {
                out.push_str(" down");
            }
            if let Some(eval) = info.evaluator() {
                out.push_str(&format!(" eval={}", eval.name()));
            }
            out.push('\n');
        }
        out
    }
}

impl Default for Registry {
    fn default() -> Registry {
        Registry::with_builtins()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_present_and_delta0() {
        let reg = Registry::with_builtins();
        for name in BUILTIN_NAMES {
            let info = reg.get(name).expect("builtin present");
            assert_eq!(info.assigned_class(), LevyClass::DELTA0);
            assert!(info.upwards_absolute() && info.downwards_absolute());
            assert!(info.evaluator().is_some());
        }
        assert_eq!(reg.get("FuncInto").unwrap().arity(), 3);
        assert_eq!(reg.get("Ord").unwrap().arity(), 1);
    }

    #[test]
    fn user_entries_cannot_shadow_builtins() {
        let mut reg = Registry::with_builtins();
        let info =
            PredicateInfo::new("Ord", 1, LevyClass::DELTA0, true, true, None).unwrap();
        assert_eq!(
            reg.register(info),
            Err(RegistryError::ShadowsBuiltin("Ord".to_string()))
        );
    }

    #[test]
    fn delta0_forces_both_flags() {
        let info =
            PredicateInfo::new("P", 2, LevyClass::DELTA0, false, false, None).unwrap();
        assert!(info.upwards_absolute() && info.downwards_absolute());
        let info = PredicateInfo::new("Q", 1, LevyClass::sigma(1), false, false, None).unwrap();
        assert!(!info.upwards_absolute() && !info.downwards_absolute());
    }

    #[test]
    fn evaluator_arity_must_match() {
        let res = PredicateInfo::new(
            "P",
            2,
            LevyClass::DELTA0,
            true,
            true,
            Some(BuiltinEval::Ord),
        );
        assert!(matches!(
            res,
            Err(RegistryError::EvaluatorArityMismatch { .. })
        ));
    }

    #[test]
    fn parse_line_round_trip() {
        let info = Registry::parse_line("ZeroSharpExists/0 class=Sigma2 up")
            .unwrap()
            .unwrap();
        assert_eq!(info.name(), "ZeroSharpExists");
        assert_eq!(info.arity(), 0);
        assert_eq!(info.assigned_class(), LevyClass::sigma(2));
        assert!(info.upwards_absolute());
        assert!(!info.downwards_absolute());
        assert!(info.evaluator().is_none());

        let info = Registry::parse_line("MyOrd/1 class=Delta1 up down eval=Ord")
            .unwrap()
            .unwrap();
        assert_eq!(info.evaluator(), Some(BuiltinEval::Ord));

        // The explicit spelling for an entry without finite-model semantics.
        let info = Registry::parse_line("OmegaTalk/1 class=Delta1 up down eval=none")
            .unwrap()
            .unwrap();
        assert_eq!(info.evaluator(), None);

        assert_eq!(Registry::parse_line("   # only a comment").unwrap(), None);
        assert_eq!(Registry::parse_line("").unwrap(), None);
    }

    #[test]
    fn unknown_flags_are_errors() {
        assert!(matches!(
            Registry::parse_line("P/1 class=Delta0 sideways"),
            Err(RegistryError::MalformedLine { .. })
        ));
        assert!(matches!(
            Registry::parse_line("P/1 class=Sigma0"),
            Err(RegistryError::MalformedLine { .. })
        ));
        assert!(matches!(
            Registry::parse_line("P/1 class=Delta0 eval=Zeta"),
            Err(RegistryError::UnknownEvaluator(..))
        ));
    }

    #[test]
    fn load_str_registers_entries() {
        let mut reg = Registry::with_builtins();
        reg.load_str("# corpus atoms\nTailMatch/3 class=Delta1 up down\n\nSeq/1 class=Delta0\n")
            .unwrap();
        assert_eq!(reg.user_entry_count(), 2);
        assert!(reg.get("TailMatch").is_some());
        let rendered = reg.render_user_entries();
        let mut reg2 = Registry::with_builtins();
        reg2.load_str(&rendered).unwrap();
        assert_eq!(reg2.user_entry_count(), 2);
        assert_eq!(
            reg2.get("TailMatch").unwrap(),
            reg.get("TailMatch").unwrap()
        );
    }
}
