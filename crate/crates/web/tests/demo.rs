use picard_ff_web::{f1_forms, koike_table, trace_grid, MAX_GRID_ORDER};

/// `1 + p - #C` for `y^3 = x(x-1)(x-l)(x-m)` over `F_p`, counted directly.
fn picard_trace(p: u64, l: u64, m: u64) -> i64 {
    let mut count = 1;
    for x in 0..p {
        let f = x * ((x + p - 1) % p) % p * ((x + p - l) % p) % p * ((x + p - m) % p) % p;
        count += (0..p).filter(|y| y * y % p * y % p == f).count() as i64;
    }
    1 + p as i64 - count
}

#[test]
fn grid_covers_every_pair_and_matches_direct_counts() {
    let g = trace_grid(13).unwrap();
    assert_eq!(g.cells.len(), 11 * 10);
    assert_eq!(g.mismatches, 0);
    assert_eq!(g.bound, 21);
    for c in &g.cells {
        let t = picard_trace(13, c.lambda as u64, c.mu as u64);
        assert_eq!((c.trace, c.formula), (t, Some(t)));
    }
}

#[test]
fn grid_rejects_unsuitable_fields() {
    assert!(trace_grid(11).is_err());
    assert!(trace_grid(12).is_err());
    assert!(trace_grid(MAX_GRID_ORDER + 1).is_err());
}

#[test]
fn f1_forms_agree_and_axes_are_reported() {
    let v = f1_forms(13, [4, 8, 6, 0], 5, 7).unwrap();
    assert!(v.agree);
    assert_eq!(v.forms.len(), 3);
    let texts: Vec<&str> = v.forms.iter().map(|f| f.value.as_ref().unwrap().text.as_str()).collect();
    assert!(texts.windows(2).all(|w| w[0] == w[1]));

    let on_axis = f1_forms(7, [2, 2, 2, 0], 0, 3).unwrap();
    assert!(!on_axis.agree);
    assert!(on_axis.forms[0].value.is_some());
    assert!(on_axis.forms[1].error.is_some());

    // beyond the double-sum limit only the single sums evaluate
    let big = f1_forms(131, [0, 0, 0, 0], 2, 3).unwrap();
    assert!(big.forms[0].error.is_some());
    assert!(big.forms[1].value.is_some());
    assert!(f1_forms(7, [6, 0, 0, 0], 1, 2).is_err());
}

#[test]
fn koike_rows_are_integral_and_match() {
    let t = koike_table(11).unwrap();
    assert_eq!(t.rows.len(), 9);
    assert!(t.rows.iter().all(|r| r.matches && r.formula.order == 1));
    let json = serde_json::to_string(&t).unwrap();
    assert!(json.contains("\"generator\":2"));
}
