//! Plain-text experiment configuration.
//!
//! ```text
//! # comment
//! [run]
//! seed = 7
//!
//! [blowup]
//! alpha = 0.25
//! n_list = 2, 3, 4
//! ```
//!
//! Keys live in sections, lists are comma-separated, and every key must be
//! known to the scenario being run. [`Config::echo`] writes the canonical form,
//! which parses back to an equal value.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Sections of `key = value` pairs, kept sorted for a canonical echo.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Trims list items so that `1,2 ,3` and `1, 2, 3` are the same value.
fn normalize(value: &str) -> String {
    if value.contains(',') {
        value
            .split(',')
            .map(str::trim)
            .collect::<Vec<_>>()
            .join(", ")
    } else {
        value.trim().to_string()
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut current: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let at = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .map(str::trim)
                    .filter(|n| is_ident(n))
                    .ok_or_else(|| {
                        Error::Config(format!("line {at}: bad section header {line:?}"))
                    })?;
                if cfg.sections.contains_key(name) {
                    return config_err(format!("line {at}: section [{name}] appears twice"));
                }
                cfg.sections.insert(name.to_string(), BTreeMap::new());
                current = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return config_err(format!("line {at}: expected `key = value`, got {line:?}"));
            };
            let key = key.trim();
            if !is_ident(key) {
                return config_err(format!("line {at}: bad key {key:?}"));
            }
            let value = normalize(value);
            if value.is_empty() || value.contains('\n') {
                return config_err(format!("line {at}: empty value for {key}"));
            }
            let Some(section) = &current else {
                return config_err(format!("line {at}: key {key} outside any section"));
            };
            let entries = cfg.sections.get_mut(section).expect("section exists");
            if entries.insert(key.to_string(), value).is_some() {
                return config_err(format!("line {at}: key {key} repeated in [{section}]"));
            }
        }
        Ok(cfg)
    }

    /// Canonical text form; `Config::parse(&c.echo()) == c`.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (i, (name, entries)) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "[{name}]");
            for (k, v) in entries {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl ToString) {
        self.sections
            .entry(section.to_string())
            .or_default()
            .insert(key.to_string(), normalize(&value.to_string()));
    }

    pub fn raw(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(String::as_str)
    }

    pub fn sections(&self) -> impl Iterator<Item = (&str, &BTreeMap<String, String>)> {
        self.sections.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Fills in `defaults` and rejects any section or key not listed there.
    pub fn resolve(&self, defaults: &[(&str, &str, &str)]) -> Result<Self> {
        for (section, entries) in &self.sections {
            for key in entries.keys() {
                if !defaults.iter().any(|(s, k, _)| s == section && k == key) {
                    return config_err(format!("unknown key {key} in [{section}]"));
                }
            }
            if entries.is_empty() && !defaults.iter().any(|(s, _, _)| s == section) {
                return config_err(format!("unknown section [{section}]"));
            }
        }
        let mut out = self.clone();
        for (s, k, v) in defaults {
            if out.raw(s, k).is_none() {
                out.set(s, k, v);
            }
        }
        Ok(out)
    }

    fn require(&self, section: &str, key: &str) -> Result<&str> {
        self.raw(section, key)
            .ok_or_else(|| Error::Config(format!("missing key {key} in [{section}]")))
    }

    pub fn get<T: FromStr>(&self, section: &str, key: &str) -> Result<T> {
        let raw = self.require(section, key)?;
        raw.parse()
            .map_err(|_| Error::Config(format!("[{section}] {key} = {raw:?} has the wrong type")))
    }

    pub fn get_list<T: FromStr>(&self, section: &str, key: &str) -> Result<Vec<T>> {
        let raw = self.require(section, key)?;
        raw.split(',')
            .map(|item| {
                item.trim().parse().map_err(|_| {
                    Error::Config(format!("[{section}] {key}: bad list item {item:?}"))
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_sections_lists_and_comments() {
        let c = Config::parse("# top\n[run]\nseed = 7\n\n[blowup]\nn_list = 2,3 , 4\nalpha=0.25\n")
            .unwrap();
        assert_eq!(c.get::<u64>("run", "seed").unwrap(), 7);
        assert_eq!(
            c.get_list::<u32>("blowup", "n_list").unwrap(),
            vec![2, 3, 4]
        );
        assert_eq!(c.raw("blowup", "n_list"), Some("2, 3, 4"));
        assert_eq!(c.get::<f64>("blowup", "alpha").unwrap(), 0.25);
        assert!(c.get::<u64>("blowup", "alpha").is_err());
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "seed = 1\n",
            "[run\nseed = 1\n",
            "[run]\nseed\n",
            "[run]\nseed = \n",
            "[run]\nseed = 1\nseed = 2\n",
            "[run]\n[run]\n",
            "[run]\nbad key = 1\n",
        ] {
            assert!(
                matches!(Config::parse(bad), Err(Error::Config(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn resolve_fills_defaults_and_rejects_unknown_keys() {
        let defaults = [("run", "seed", "1"), ("x", "a", "0.5"), ("x", "b", "1, 2")];
        let c = Config::parse("[x]\na = 3\n")
            .unwrap()
            .resolve(&defaults)
            .unwrap();
        assert_eq!(c.raw("x", "a"), Some("3"));
        assert_eq!(c.raw("x", "b"), Some("1, 2"));
        assert_eq!(c.raw("run", "seed"), Some("1"));
        let err = Config::parse("[x]\nc = 3\n").unwrap().resolve(&defaults);
        assert!(matches!(err, Err(Error::Config(_))));
        let err = Config::parse("[y]\n").unwrap().resolve(&defaults);
        assert!(matches!(err, Err(Error::Config(_))));
    }

    fn ident() -> impl Strategy<Value = String> {
        "[a-z][a-z0-9_]{0,6}"
    }

    fn value() -> impl Strategy<Value = String> {
        prop_oneof![
            "[a-z0-9.+-]{1,8}",
            prop::collection::vec("[0-9.e-]{1,5}", 1..5).prop_map(|v| v.join(" ,")),
        ]
    }

    proptest! {
        #[test]
        fn echo_round_trip(entries in prop::collection::vec((ident(), ident(), value()), 0..12)) {
            let mut c = Config::default();
            for (s, k, v) in &entries {
                c.set(s, k, v);
            }
            let back = Config::parse(&c.echo()).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.echo(), c.echo());
        }
    }
}
