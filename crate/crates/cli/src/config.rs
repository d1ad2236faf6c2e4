//! Flat `key = value` config files and the flag > file > default
//! precedence used by every subcommand.

use anyhow::{bail, Context, Result};
use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

/// Parsed config file: one `key = value` pair per line, `#` starts a
/// comment, blank lines ignored. Later duplicates win.
#[derive(Debug, Default)]
pub struct ConfigFile {
    map: HashMap<String, String>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        ConfigFile::default()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected `key = value`, got {raw:?}", idx + 1);
            };
            let key = key.trim();
            if key.is_empty() {
                bail!("line {}: empty key", idx + 1);
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { map })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key `{key}`: cannot parse {raw:?}: {e}")),
        }
    }

    /// Comma-separated list value.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: Display,
    {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    item.trim().parse().map_err(|e| {
                        anyhow::anyhow!("config key `{key}`: cannot parse {item:?}: {e}")
                    })
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }
}

/// Command-line flag beats config file beats default.
pub fn resolve<T: FromStr>(flag: Option<T>, config: &ConfigFile, key: &str, default: T) -> Result<T>
where
    T::Err: Display,
{
    match flag {
        Some(v) => Ok(v),
        None => Ok(config.get(key)?.unwrap_or(default)),
    }
}

/// Like [`resolve`] but the parameter has no default and must come from
/// somewhere.
pub fn resolve_required<T: FromStr>(flag: Option<T>, config: &ConfigFile, key: &str) -> Result<T>
where
    T::Err: Display,
{
    match flag {
        Some(v) => Ok(v),
        None => config
            .get(key)?
            .ok_or_else(|| anyhow::anyhow!("missing required parameter `--{key}`")),
    }
}

/// A `true` flag wins; otherwise the config value; otherwise false.
pub fn resolve_switch(flag: bool, config: &ConfigFile, key: &str) -> Result<bool> {
    if flag {
        return Ok(true);
    }
    Ok(config.get(key)?.unwrap_or(false))
}
