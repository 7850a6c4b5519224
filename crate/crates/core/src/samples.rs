//! Worked example games used across tests and docs.
//!
//! The running scenario: a company attributes customer conversions to
//! three advertising channels — display ads (`d`), search ads (`s`), and
//! email ads (`e`). Conversion scores per channel combination form a
//! 3-player coalitional game. Email alone reads as spam (score −10) but
//! works well alongside search (40); display and search have no synergy.
//! The manipulated variants model the search+email pair gaming the
//! attribution in three ways.

use crate::game::{CoalitionalGame, Domain};
use crate::ratio::int;

/// Player indices of the advertising scenario.
pub const DISPLAY: usize = 0;
pub const SEARCH: usize = 1;
pub const EMAIL: usize = 2;

/// Channel names matching [`DISPLAY`], [`SEARCH`], [`EMAIL`].
pub const CHANNELS: [&str; 3] = ["d", "s", "e"];

fn game(table: [i64; 8]) -> CoalitionalGame {
    CoalitionalGame::new(3, table.iter().map(|&x| int(x)).collect(), Domain::Unrestricted)
        .expect("valid sample table")
}

/// The original attribution game.
///
/// Worths by coalition: d=5, s=20, e=−10, ds=25, de=1, se=40, dse=54.
pub fn ad_campaign() -> CoalitionalGame {
    game([0, 5, 20, 25, -10, 1, 40, 54])
}

/// `{s,e}` reattributes 12 points of joint credit to email alone while
/// keeping its own total and all synergies with the outsider `d` intact:
/// only `v(e)` and `v(de)` move (−10 → 2, 1 → 13).
pub fn ad_campaign_internal_realloc() -> CoalitionalGame {
    game([0, 5, 20, 25, 2, 13, 40, 54])
}

/// `{s,e}` reattributes credit in a way that also changes the synergy
/// between email and display: only `v(e)` moves (−10 → 2), so `d`'s
/// marginal contribution to email drops by 12.
pub fn ad_campaign_synergy_realloc() -> CoalitionalGame {
    game([0, 5, 20, 25, 2, 1, 40, 54])
}

/// `{s,e}` underreports its own joint score, ceteris paribus: only
/// `v(se)` moves (40 → 34).
pub fn ad_campaign_underreport() -> CoalitionalGame {
    game([0, 5, 20, 25, -10, 1, 34, 54])
}
