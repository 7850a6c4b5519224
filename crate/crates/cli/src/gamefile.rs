//! The on-disk game format.
//!
//! A game file is JSON with named players and explicit worths:
//!
//! ```json
//! {
//!   "players": ["d", "s", "e"],
//!   "domain": "unrestricted",
//!   "worths": [
//!     {"coalition": ["d"], "worth": "5"},
//!     {"coalition": ["d", "s"], "worth": "25"}
//!   ]
//! }
//! ```
//!
//! Unlisted nonempty coalitions default to worth 0; the empty coalition
//! must not appear. Worth literals are exact: `p`, `p/q`, or a decimal
//! with at most 12 fractional digits. A dividend table uses the same
//! entry schema under a `dividends` key instead of `worths`.
//!
//! Canonical serialization — what every command emits — lists only
//! nonzero entries, orders them by coalition bitmask, sorts each
//! coalition's member names, normalizes rationals to `p/q` strings, and
//! sorts object keys. Parsing then serializing a canonical file is the
//! identity; serializing anything else canonicalizes it.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use tugames::game::{Coalition, CoalitionalGame, DividendVector, Domain};
use tugames::ratio::{self, Rational};

/// A parsed game file: a game plus its player names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameFile {
    pub players: Vec<String>,
    pub content: Content,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Content {
    Worths(CoalitionalGame),
    Dividends { dividends: DividendVector, domain: Domain },
}

#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

impl GameFile {
    pub fn game(&self) -> CoalitionalGame {
        match &self.content {
            Content::Worths(game) => game.clone(),
            Content::Dividends { dividends, domain } => {
                let game = CoalitionalGame::from_dividends(dividends);
                game.with_domain(*domain).expect("validated at parse time")
            }
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.content {
            Content::Worths(game) => game.domain(),
            Content::Dividends { domain, .. } => *domain,
        }
    }

    pub fn player_count(&self) -> u8 {
        self.players.len() as u8
    }

    /// Index of a player name.
    pub fn player(&self, name: &str) -> Result<usize, ParseError> {
        self.players
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| ParseError(format!("unknown player {name:?}")))
    }

    /// Coalition from a list of player names.
    pub fn coalition(&self, names: &[String]) -> Result<Coalition, ParseError> {
        let mut members = Vec::with_capacity(names.len());
        for name in names {
            members.push(self.player(name)?);
        }
        Coalition::from_members(members, self.player_count())
            .map_err(|e| ParseError(e.to_string()))
    }

    pub fn from_game(players: Vec<String>, game: CoalitionalGame) -> GameFile {
        GameFile { players, content: Content::Worths(game) }
    }

    pub fn from_dividends(players: Vec<String>, dividends: DividendVector, domain: Domain) -> GameFile {
        GameFile { players, content: Content::Dividends { dividends, domain } }
    }
}

/// Default player names `p1, p2, …` for games born without a file.
pub fn default_players(n: u8) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

pub fn parse_str(text: &str) -> Result<GameFile, ParseError> {
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return err(format!("invalid JSON: {e}")),
    };
    parse_value(&value)
}

pub fn parse_value(value: &Value) -> Result<GameFile, ParseError> {
    let obj = match value.as_object() {
        Some(o) => o,
        None => return err("top level must be a JSON object"),
    };
    for key in obj.keys() {
        if !matches!(key.as_str(), "players" | "domain" | "worths" | "dividends") {
            return err(format!("unknown key {key:?}"));
        }
    }

    let players = parse_players(obj)?;
    let n = players.len() as u8;

    let domain = match obj.get("domain") {
        None => Domain::Unrestricted,
        Some(Value::String(s)) => match s.as_str() {
            "unrestricted" => Domain::Unrestricted,
            "superadditive" => Domain::Superadditive,
            other => return err(format!("unknown domain {other:?}")),
        },
        Some(_) => return err("domain must be a string"),
    };

    let (key, entries) = match (obj.get("worths"), obj.get("dividends")) {
        (Some(w), None) => ("worths", w),
        (None, Some(d)) => ("dividends", d),
        (Some(_), Some(_)) => return err("a file holds either worths or dividends, not both"),
        (None, None) => return err("missing worths (or dividends)"),
    };
    let entries = match entries.as_array() {
        Some(a) => a,
        None => return err(format!("{key} must be an array")),
    };

    let mut table = vec![Rational::from_integer(0.into()); 1usize << n];
    let mut seen = vec![false; 1usize << n];
    for (idx, entry) in entries.iter().enumerate() {
        let at = |msg: String| format!("{key}[{idx}]: {msg}");
        let entry = match entry.as_object() {
            Some(e) => e,
            None => return err(at("must be an object".into())),
        };
        for k in entry.keys() {
            if !matches!(k.as_str(), "coalition" | "worth") {
                return err(at(format!("unknown key {k:?}")));
            }
        }
        let coalition = match entry.get("coalition").and_then(Value::as_array) {
            Some(c) => c,
            None => return err(at("missing coalition array".into())),
        };
        let mut mask = 0usize;
        for name in coalition {
            let name = match name.as_str() {
                Some(s) => s,
                None => return err(at("coalition members must be strings".into())),
            };
            let i = match players.iter().position(|p| p == name) {
                Some(i) => i,
                None => return err(at(format!("unknown player {name:?}"))),
            };
            if mask >> i & 1 == 1 {
                return err(at(format!("duplicate player {name:?} in coalition")));
            }
            mask |= 1 << i;
        }
        if mask == 0 {
            return err(at("the empty coalition must not appear".into()));
        }
        if seen[mask] {
            return err(at("coalition listed twice".into()));
        }
        seen[mask] = true;
        let literal = match entry.get("worth").and_then(Value::as_str) {
            Some(s) => s,
            None => return err(at("missing worth string".into())),
        };
        table[mask] = match ratio::parse(literal) {
            Ok(r) => r,
            Err(e) => return err(at(e.to_string())),
        };
    }

    let content = if key == "worths" {
        let game = match CoalitionalGame::new(n, table, domain) {
            Ok(g) => g,
            Err(e) => return err(e.to_string()),
        };
        Content::Worths(game)
    } else {
        let dividends = match DividendVector::new(n, table) {
            Ok(d) => d,
            Err(e) => return err(e.to_string()),
        };
        // a dividend file with a superadditive tag must reconstruct to a
        // superadditive game
        if let Err(e) = CoalitionalGame::from_dividends(&dividends).with_domain(domain) {
            return err(e.to_string());
        }
        Content::Dividends { dividends, domain }
    };
    Ok(GameFile { players, content })
}

fn parse_players(obj: &Map<String, Value>) -> Result<Vec<String>, ParseError> {
    let players = match obj.get("players").and_then(Value::as_array) {
        Some(p) => p,
        None => return err("missing players array"),
    };
    if players.is_empty() || players.len() > 16 {
        return err("between 1 and 16 players are supported");
    }
    let mut names = Vec::with_capacity(players.len());
    for p in players {
        let name = match p.as_str() {
            Some(s) if !s.is_empty() => s.to_owned(),
            _ => return err("player names must be nonempty strings"),
        };
        if names.contains(&name) {
            return err(format!("duplicate player {name:?}"));
        }
        names.push(name);
    }
    Ok(names)
}

/// Sorted member names of a coalition.
pub fn coalition_names(players: &[String], c: Coalition) -> Vec<String> {
    let mut names: Vec<String> = c.members().map(|i| players[i].clone()).collect();
    names.sort();
    names
}

fn domain_str(domain: Domain) -> &'static str {
    match domain {
        Domain::Unrestricted => "unrestricted",
        Domain::Superadditive => "superadditive",
    }
}

fn entries_value(players: &[String], n: u8, table: &[Rational]) -> Value {
    let mut entries = Vec::new();
    for (mask, value) in table.iter().enumerate() {
        if mask == 0 || *value == Rational::from_integer(0.into()) {
            continue;
        }
        let coalition = Coalition::from_mask(mask, n).expect("mask");
        entries.push(json!({
            "coalition": coalition_names(players, coalition),
            "worth": ratio::display(value),
        }));
    }
    Value::Array(entries)
}

/// Canonical JSON value of a game file.
pub fn to_value(file: &GameFile) -> Value {
    let n = file.player_count();
    let mut obj = BTreeMap::new();
    obj.insert("players".to_owned(), json!(file.players));
    obj.insert("domain".to_owned(), json!(domain_str(file.domain())));
    match &file.content {
        Content::Worths(game) => {
            obj.insert("worths".to_owned(), entries_value(&file.players, n, game.worths()));
        }
        Content::Dividends { dividends, .. } => {
            obj.insert(
                "dividends".to_owned(),
                entries_value(&file.players, n, dividends.values()),
            );
        }
    }
    Value::Object(obj.into_iter().collect())
}

/// Canonical text of a game file (pretty, sorted keys, trailing newline).
pub fn to_string(file: &GameFile) -> String {
    let mut text = serde_json::to_string_pretty(&to_value(file)).expect("serializable");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use tugames::ratio::int;
    use tugames::samples;

    fn ad_file() -> GameFile {
        GameFile::from_game(
            samples::CHANNELS.iter().map(|s| s.to_string()).collect(),
            samples::ad_campaign(),
        )
    }

    #[test]
    fn canonical_round_trip() {
        let text = to_string(&ad_file());
        let parsed = parse_str(&text).unwrap();
        assert_eq!(parsed, ad_file());
        assert_eq!(to_string(&parsed), text);
    }

    #[test]
    fn canonical_round_trip_on_random_games() {
        use tugames::audit::{sample_game, search_rng, SearchConfig};
        let mut rng = search_rng(5);
        for k in 0..60u8 {
            let n = k % 5 + 1;
            let cfg = SearchConfig { n, denom: 3, ..SearchConfig::default() };
            let game = sample_game(&mut rng, &cfg);
            let file = GameFile::from_game(default_players(n), game);
            let text = to_string(&file);
            let parsed = parse_str(&text).unwrap();
            assert_eq!(parsed, file);
            assert_eq!(to_string(&parsed), text);
        }
    }

    #[test]
    fn sparse_files_default_to_zero() {
        let file = parse_str(
            r#"{"players": ["a", "b"], "worths": [{"coalition": ["a", "b"], "worth": "3/2"}]}"#,
        )
        .unwrap();
        let game = file.game();
        assert_eq!(*game.worth(Coalition::singleton(0, 2).unwrap()).unwrap(), int(0));
        assert_eq!(
            *game.worth(Coalition::grand(2)).unwrap(),
            tugames::ratio::frac(3, 2)
        );
    }

    #[test]
    fn rejects_malformed_files() {
        let cases = [
            (r#"[]"#, "top level"),
            (r#"{"worths": []}"#, "players"),
            (r#"{"players": ["a", "a"], "worths": []}"#, "duplicate player"),
            (r#"{"players": ["a"], "worths": [], "dividends": []}"#, "either worths or dividends"),
            (r#"{"players": ["a"], "worths": [{"coalition": [], "worth": "1"}]}"#, "empty coalition"),
            (
                r#"{"players": ["a"], "worths": [{"coalition": ["a"], "worth": "1"}, {"coalition": ["a"], "worth": "2"}]}"#,
                "twice",
            ),
            (r#"{"players": ["a"], "worths": [{"coalition": ["b"], "worth": "1"}]}"#, "unknown player"),
            (r#"{"players": ["a"], "worths": [{"coalition": ["a"], "worth": "1/0"}]}"#, "denominator"),
            (r#"{"players": ["a"], "domain": "convex", "worths": []}"#, "unknown domain"),
            (r#"{"players": ["a"], "worths": [{"coalition": ["a"], "worth": "0.1234567890123"}]}"#, "fractional digits"),
        ];
        for (text, needle) in cases {
            let error = parse_str(text).unwrap_err().to_string();
            assert!(error.contains(needle), "error {error:?} should mention {needle:?}");
        }
    }

    #[test]
    fn superadditive_tag_is_validated_at_parse_time() {
        let bad = r#"{"players": ["a", "b"], "domain": "superadditive",
                      "worths": [{"coalition": ["a"], "worth": "1"},
                                 {"coalition": ["a", "b"], "worth": "0"}]}"#;
        assert!(parse_str(bad).is_err());
    }

    #[test]
    fn coalition_names_are_sorted() {
        let file = ad_file();
        let se = file.coalition(&["s".into(), "e".into()]).unwrap();
        assert_eq!(coalition_names(&file.players, se), vec!["e".to_string(), "s".to_string()]);
    }

    #[test]
    fn dividend_files_parse_and_reconstruct() {
        let text = r#"{"players": ["a", "b"], "dividends": [
            {"coalition": ["a"], "worth": "2"},
            {"coalition": ["a", "b"], "worth": "5"}
        ]}"#;
        let file = parse_str(text).unwrap();
        let game = file.game();
        assert_eq!(*game.worth(Coalition::grand(2)).unwrap(), int(7));
    }
}
