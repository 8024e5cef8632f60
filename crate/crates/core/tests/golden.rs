mod common {
    pub mod golden;
}

#[test]
fn parser_golden() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let n = common::golden::check(update).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(n, 300);
}
