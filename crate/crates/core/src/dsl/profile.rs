use std::collections::BTreeMap;
use std::fmt::Write;

use super::ParseError;
use crate::cyclic::PositionalProfile;
use crate::error::{Error, Result};
use crate::game::{ActionLabel, FiniteGame, TreeProfile};

/// A profile file: one `key = action` per line, where the key is a node
/// path such as `/` or `/p/f` for finite games and a node name otherwise.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProfileDoc {
    pub entries: Vec<(String, ActionLabel)>,
}

pub fn parse_profile(text: &str) -> Result<ProfileDoc, ParseError> {
    let mut entries: Vec<(String, ActionLabel)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let err = |column: usize, expected: &str, found: &str| ParseError {
            line: i + 1,
            column,
            expected: expected.to_string(),
            found: found.to_string(),
        };
        let indent = line.len() - line.trim_start().len();
        let Some(eq) = line.find('=') else {
            return Err(err(indent + 1, "`key = action`", &format!("`{}`", line.trim())));
        };
        let key = line[..eq].trim();
        if key.is_empty() {
            return Err(err(eq + 1, "a node path or name", "`=`"));
        }
        let value = line[eq + 1..].trim();
        let value_col = eq + 2 + (line[eq + 1..].len() - line[eq + 1..].trim_start().len());
        let label = value.parse::<ActionLabel>().map_err(|_| {
            let found = if value.is_empty() {
                "end of line".to_string()
            } else {
                format!("`{value}`")
            };
            err(value_col, "an action label", &found)
        })?;
        if entries.iter().any(|(k, _)| k == key) {
            return Err(err(indent + 1, "a key not given before", &format!("`{key}`")));
        }
        entries.push((key.to_string(), label));
    }
    Ok(ProfileDoc { entries })
}

impl ProfileDoc {
    /// The tree profile on `game`; every decision node must be given
    /// exactly once and no other path may appear.
    pub fn to_tree(&self, game: &FiniteGame) -> Result<TreeProfile> {
        let profile = TreeProfile::from_choices(game, self.entries.iter().map(|(k, l)| (k.as_str(), l.as_str())))?;
        if self.entries.len() != game.decision_count() {
            let known: Vec<String> = profile.choices(game)?.iter().map(|(p, _)| p.as_path()).collect();
            let extra = self
                .entries
                .iter()
                .map(|(k, _)| k)
                .find(|k| !known.contains(k))
                .cloned()
                .unwrap_or_default();
            return Err(Error::UnknownNode(extra));
        }
        Ok(profile)
    }

    pub fn to_positional(&self) -> PositionalProfile {
        PositionalProfile::from_map(self.entries.iter().cloned().collect::<BTreeMap<_, _>>())
    }
}

/// Profile file text for a tree profile, in preorder.
pub fn tree_profile_text(game: &FiniteGame, profile: &TreeProfile) -> Result<String> {
    let mut out = String::new();
    for (path, label) in profile.choices(game)? {
        writeln!(out, "{} = {label}", path.as_path()).unwrap();
    }
    Ok(out)
}

/// Profile file text for a positional profile, points in the given order.
pub fn positional_profile_text<'a>(profile: &PositionalProfile, order: impl IntoIterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for name in order {
        if let Some(label) = profile.choice(name) {
            writeln!(out, "{name} = {label}").unwrap();
        }
    }
    out
}
