mod common;

use ax_goodput::phy_tables::{all_table_cells, legacy_rate_for, lookup_profile, Mode, PhyRate};
use common::{golden_rows, profile_values};

#[test]
fn every_table_row_round_trips() {
    let rows = golden_rows();
    assert_eq!(rows.len(), 72);
    assert_eq!(rows.len(), all_table_cells().len());
    for row in rows {
        let got = lookup_profile(row.mode, row.stations, row.mcs);
        match row.values {
            Some(expect) => assert_eq!(profile_values(&got.unwrap()), expect, "{row:?}"),
            None => assert!(got.is_err(), "{row:?}"),
        }
    }
}

#[test]
fn su_rows_hold_for_every_station_count() {
    for row in golden_rows().into_iter().filter(|r| r.mode == Mode::Su) {
        for s in [4, 8, 16, 32, 64] {
            let p = lookup_profile(Mode::Su, s, row.mcs).unwrap();
            assert_eq!(Some(profile_values(&p)), row.values);
        }
    }
}

/// The basic-rate rule reproduces most of the tabulated legacy rates; the
/// tables stay authoritative for the rest.
#[test]
fn legacy_rule_disagreements_are_known() {
    let mut mismatches = Vec::new();
    for row in golden_rows().into_iter().filter(|r| r.mode == Mode::Mu) {
        let Some(v) = row.values else { continue };
        let rule = legacy_rate_for(PhyRate::from_deci_mbps(v[2] as u32));
        if rule.deci_mbps() as u64 != v[4] {
            mismatches.push((row.stations, row.mcs));
        }
    }
    assert_eq!(mismatches, vec![(16, 1), (16, 2), (64, 7), (64, 9)]);
}
