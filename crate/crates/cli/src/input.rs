//! Reading elements and sets from files or inline JSON.

use std::io::Read;

use ergo_core::json::{self, Element};
use ergo_core::{ClopenSet, FullGroupElement};
use serde_json::Value;

use crate::CliError;

/// Inline JSON if the argument starts with `{`, standard input for `-`,
/// otherwise a file path.
pub fn read_json(arg: &str) -> Result<Value, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))
}

pub fn parse_element(arg: &str) -> Result<Element, CliError> {
    Ok(json::element_from_json(&read_json(arg)?)?)
}

pub fn parse_odometer_element(arg: &str) -> Result<FullGroupElement, CliError> {
    Ok(json::odometer_element_from_json(&read_json(arg)?)?)
}

/// A set as JSON (inline or file) or as the shorthand `depth:s,s,…`.
pub fn parse_set(arg: &str) -> Result<ClopenSet, CliError> {
    if let Some((depth, prefixes)) = arg.split_once(':') {
        if !depth.trim_start().starts_with('{') {
            let depth: u32 = depth
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad depth in set {arg:?}")))?;
            let prefixes = prefixes
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Usage(format!("bad prefix in set {arg:?}")))?;
            return Ok(ClopenSet::new(depth, prefixes)?);
        }
    }
    Ok(json::set_from_json(&read_json(arg)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let t = parse_element(r#"{"system":"dyadic_odometer","depth":0,"cocycle":[1]}"#).unwrap();
        assert_eq!(t, Element::Odometer(FullGroupElement::odometer()));
        let bad = parse_element(r#"{"system":"dyadic_odometer","depth":2,"cocycle":[2,0,-1,1]}"#)
            .unwrap_err();
        assert!(bad.to_string().contains("prefixes 1 and 2"));
        assert_eq!(bad.exit_code(), 2);
        assert!(matches!(parse_element("{not json"), Err(CliError::Usage(_))));
    }

    #[test]
    fn set_shorthand() {
        assert_eq!(parse_set("2:1,3").unwrap(), ClopenSet::new(1, [1]).unwrap());
        assert_eq!(
            parse_set(r#"{"depth":2,"prefixes":[1,3]}"#).unwrap(),
            parse_set("2:1,3").unwrap()
        );
        assert!(parse_set("x:1").is_err());
    }
}
