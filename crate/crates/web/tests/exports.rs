use oseq_browser::{count_m_json, staircase_json, table_json, MAX_TABLE_D};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn table_rows() {
    let v = parse(table_json(12).unwrap());
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 12);
    let o: Vec<u64> = rows.iter().map(|r| r["O"].as_u64().unwrap()).collect();
    assert_eq!(o, [1, 1, 2, 3, 5, 8, 12, 18, 27, 40, 57, 82]);
    assert_eq!(rows[5]["A"], 3);
    assert_eq!(rows[0]["ratio"], Value::Null);
    assert_eq!(rows[11]["ratio"], serde_json::json!([82, 57]));
    // 3/2 repeats at d = 8, 9 and 82/57 > 57/40 at d = 12
    let dec: Vec<Option<bool>> = rows.iter().map(|r| r["decreasing"].as_bool()).collect();
    assert_eq!(dec[7], Some(false));
    assert_eq!(dec[8], Some(false));
    assert_eq!(dec[11], Some(false));
    assert_eq!(dec[10], Some(true));
}

#[test]
fn table_matches_enumeration() {
    let t = oseq::enumerator::o_table(30).unwrap();
    let v = parse(table_json(30).unwrap());
    for (d, row) in (1..=30).zip(v.as_array().unwrap()) {
        assert_eq!(row["O"], t.o(d));
        assert_eq!(row["A"], t.a(d));
    }
}

#[test]
fn table_limits() {
    assert!(table_json(0).is_err());
    assert!(table_json(MAX_TABLE_D + 1).is_err());
    assert!(table_json(MAX_TABLE_D).is_ok());
}

#[test]
fn staircase_of_122() {
    let v = parse(staircase_json("1,2,2", 2).unwrap());
    let terms: Vec<&str> = v["ideal"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["term"].as_str().unwrap())
        .collect();
    assert_eq!(terms, ["1", "x1", "x2", "x1^2", "x1x2"]);
    assert_eq!(v["classification"]["socle_degree"], 2);
    assert_eq!(v["classification"]["max_prefix"], 1);
    assert_eq!(v["m1"]["terms"].as_array().unwrap().len(), 3);
    assert_eq!(v["m2"]["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn staircase_errors() {
    assert!(staircase_json("1,3", 2).unwrap_err().starts_with("vars"));
    assert!(staircase_json("2,1", 2).unwrap_err().starts_with("h"));
    assert!(staircase_json("1,2,1", 0).is_err());
    let v = parse(staircase_json("1,1,1", 1).unwrap());
    assert_eq!(v["m1"], Value::Null);
}

#[test]
fn count_m_values() {
    let v = parse(count_m_json(2, 1, 1, 4).unwrap());
    assert_eq!(v["count"], 0);
    let v = parse(count_m_json(1, 5, 4, 5).unwrap());
    assert_eq!(v["count"], 1);
    let o21 = parse(count_m_json(21, 20, 0, 21).unwrap());
    assert_eq!(o21["count"], 1416);
    assert!(count_m_json(0, 1, 1, 1).is_err());
}
