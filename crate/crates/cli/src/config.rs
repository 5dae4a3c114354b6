//! Config-file handling: a TOML file with top-level globals and one table per subcommand,
//! keys spelled like the long flags. Flags win over the file.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::{Path, PathBuf};

use crate::BadInput;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Globals {
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub format: Option<crate::Format>,
}

pub struct ConfigFile {
    pub globals: Globals,
    table: toml::Table,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, BadInput> {
        let text = std::fs::read_to_string(path).map_err(|e| BadInput(format!("reading {}: {e}", path.display())))?;
        let mut table: toml::Table = toml::from_str(&text).map_err(|e| BadInput(format!("parsing {}: {e}", path.display())))?;
        let mut globals = toml::Table::new();
        for key in ["out-dir", "threads", "format"] {
            if let Some(v) = table.remove(key) {
                globals.insert(key.into(), v);
            }
        }
        let globals = toml::Value::Table(globals)
            .try_into()
            .map_err(|e| BadInput(format!("{}: {e}", path.display())))?;
        Ok(ConfigFile { globals, table })
    }

    pub fn section(&self, name: &str) -> Option<&toml::Value> {
        self.table.get(name)
    }
}

fn strip(v: Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.into_iter().filter(|(_, v)| !(v.is_null() || *v == Value::Bool(false))).collect(),
        ),
        other => other,
    }
}

/// Overlay the set flags on the file section.
pub fn merge<T: Serialize + DeserializeOwned + Default>(flags: &T, section: Option<&toml::Value>) -> Result<T, BadInput> {
    let mut base = match section {
        Some(v) => serde_json::to_value(v).map_err(|e| BadInput(e.to_string()))?,
        None => Value::Object(Default::default()),
    };
    // every field (None included) shows up as a key of the default value
    let known = serde_json::to_value(T::default()).map_err(|e| BadInput(e.to_string()))?;
    if let (Value::Object(b), Value::Object(k)) = (&base, &known) {
        if let Some(key) = b.keys().find(|key| !k.contains_key(*key)) {
            return Err(BadInput(format!("unknown config key `{key}`")));
        }
    }
    let over = strip(serde_json::to_value(flags).map_err(|e| BadInput(e.to_string()))?);
    match (&mut base, over) {
        (Value::Object(b), Value::Object(o)) => b.extend(o),
        _ => return Err(BadInput("config section must be a table".into())),
    }
    serde_json::from_value(base).map_err(|e| BadInput(format!("config: {e}")))
}

/// The resolved configuration as a TOML document that `--config` reads back unchanged.
pub fn to_toml<T: Serialize>(globals: &Globals, command: &str, args: &T) -> Result<String, BadInput> {
    let mut doc = match strip(serde_json::to_value(globals).map_err(|e| BadInput(e.to_string()))?) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    doc.insert(command.into(), strip(serde_json::to_value(args).map_err(|e| BadInput(e.to_string()))?));
    toml::to_string(&Value::Object(doc)).map_err(|e| BadInput(e.to_string()))
}
