//! Published activity tables, all over a horizon of 2,000,000 steps.
//!
//! `table2a`/`table5` are random draws (10 and 50 players; the first ten rows
//! of `table5` are not `table2a`). `table2b` and `table6*` are the synthetic
//! departure scenarios, where a block of early players leaves at 100,000.
//! A listed start of 0 is stored as 1.

use crate::error::ConfigError;
use crate::model::Schedule;

pub const PRESET_HORIZON: u64 = 2_000_000;

pub const PRESET_IDS: [&str; 6] = [
    "table2a", "table2b", "table5", "table6a", "table6b", "table6c",
];

const TABLE2A: [(u64, u64); 10] = [
    (431945, 1291229),
    (304242, 1524756),
    (181824, 1183404),
    (832442, 1212339),
    (20584, 1969909),
    (601115, 1708072),
    (58083, 1866176),
    (156018, 1155994),
    (731993, 1598658),
    (374540, 1950714),
];

const TABLE5: [(u64, u64); 50] = [
    (25419, 1107891),
    (522732, 1427541),
    (770967, 1493795),
    (760785, 1561277),
    (119594, 1713244),
    (887212, 1472214),
    (729606, 1637557),
    (310982, 1325183),
    (330898, 1063558),
    (863103, 1623298),
    (358465, 1115869),
    (771270, 1074044),
    (706857, 1729007),
    (5522, 1815461),
    (772244, 1198715),
    (74550, 1986886),
    (140924, 1802196),
    (280934, 1542696),
    (828737, 1356753),
    (388677, 1271349),
    (45227, 1325330),
    (88492, 1195982),
    (597899, 1921874),
    (939498, 1894827),
    (969584, 1775132),
    (546710, 1184854),
    (311711, 1520068),
    (258779, 1662522),
    (34388, 1909320),
    (122038, 1495176),
    (684233, 1440152),
    (304613, 1097672),
    (965632, 1808397),
    (65051, 1948885),
    (607544, 1170524),
    (592414, 1046450),
    (199673, 1514234),
    (456069, 1785175),
    (292144, 1366361),
    (611852, 1139493),
    (431945, 1291229),
    (304242, 1524756),
    (181824, 1183404),
    (832442, 1212339),
    (20584, 1969909),
    (601115, 1708072),
    (58083, 1866176),
    (156018, 1155994),
    (731993, 1598658),
    (374540, 1950714),
];

/// Synthetic scenario: `leaving` players on `[1, 100000]`, then `late` on
/// `[80000, T]`, then the rest on `[1, T]`.
fn synthetic(leaving: usize, late: usize, total: usize) -> Vec<(u64, u64)> {
    let mut rows = vec![(1, 100_000); leaving];
    rows.extend(std::iter::repeat_n((80_000, PRESET_HORIZON), late));
    rows.extend(std::iter::repeat_n(
        (1, PRESET_HORIZON),
        total - leaving - late,
    ));
    rows
}

pub fn preset_schedule(id: &str) -> Result<Schedule, ConfigError> {
    let rows = match id {
        "table2a" => TABLE2A.to_vec(),
        "table2b" => synthetic(4, 4, 10),
        "table5" => TABLE5.to_vec(),
        "table6a" => synthetic(3, 3, 10),
        "table6b" => synthetic(7, 6, 20),
        "table6c" => synthetic(17, 16, 50),
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    Ok(Schedule::from_pairs(&rows, PRESET_HORIZON))
}

/// One-line description for listings.
pub fn describe(id: &str) -> Option<&'static str> {
    Some(match id {
        "table2a" => "random, 10 players",
        "table2b" => "synthetic departure, 10 players (1-4 leave at 100000)",
        "table5" => "random, 50 players",
        "table6a" => "synthetic departure, 10 players (1-3 leave at 100000)",
        "table6b" => "synthetic departure, 20 players (1-7 leave at 100000)",
        "table6c" => "synthetic departure, 50 players (1-17 leave at 100000)",
        _ => return None,
    })
}
