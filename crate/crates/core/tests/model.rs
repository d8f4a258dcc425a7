mod common;

use common::*;
use proptest::prelude::*;
use ssnpsa::model::{
    infer_from_alignment, language_check_exhaustive, parse_matrix, parse_schema, read_alignment, serialize_matrix,
    serialize_schema, VirtualText,
};

#[test]
fn running_instance_text() {
    let vt = running_instance();
    assert_eq!(vt.len(), 12);
    assert_eq!(vt.expand(), b"gtaca#gtcca#");
    assert!(vt.validate().ok());
    assert!(language_check_exhaustive(vt.schema(), 16).unwrap().ok());
}

#[test]
fn generator_example_validates() {
    let vt = generated(200, 5, 8, b"acgt", 16, 1);
    assert!(vt.validate().ok());
}

#[test]
fn fasta_alignment_infers_running_instance() {
    let words = read_alignment(">w1\ngtaca\n>w2\ngtcca\n").unwrap();
    let (s, m) = infer_from_alignment(&words).unwrap();
    assert_eq!(VirtualText::new(s, m).unwrap(), running_instance());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn files_round_trip(seed in any::<u64>(), alphabet in 0usize..3, k in 0usize..8, m in 1usize..10) {
        let vt = random_instance(seed, alphabet, k, m, 20);
        let schema = parse_schema(&serialize_schema(vt.schema())).unwrap();
        let rows = if vt.k() == 0 { Some(vt.m()) } else { None };
        let matrix = parse_matrix(&serialize_matrix(vt.matrix()), &schema, rows).unwrap();
        let back = VirtualText::new(schema, matrix).unwrap();
        prop_assert_eq!(back.expand(), vt.expand());
        prop_assert_eq!(back, vt);
    }

    #[test]
    fn inference_reproduces_words(seed in any::<u64>(), alphabet in 0usize..3, k in 0usize..8, m in 1usize..10) {
        let vt = random_instance(seed, alphabet, k, m, 20);
        let words: Vec<Vec<u8>> = (1..=vt.m()).map(|r| vt.word(r)).collect();
        let (s, mtx) = infer_from_alignment(&words).unwrap();
        let inferred = VirtualText::new(s, mtx).unwrap();
        let again: Vec<Vec<u8>> = (1..=inferred.m()).map(|r| inferred.word(r)).collect();
        prop_assert_eq!(again, words);
        prop_assert!(inferred.validate().ok());
        for site in inferred.schema().sites() {
            prop_assert!(site.low < site.high);
        }
    }

    #[test]
    fn text_char_matches_expand(seed in any::<u64>(), alphabet in 0usize..3, k in 0usize..6, m in 1usize..6) {
        let vt = random_instance(seed, alphabet, k, m, 10);
        let expanded = vt.expand();
        prop_assert_eq!(expanded.len(), vt.len());
        for pos in 1..=vt.len() {
            prop_assert_eq!(vt.text_char(pos).unwrap(), expanded[pos - 1]);
            let (r, c) = vt.row_col_of(pos).unwrap();
            prop_assert_eq!(vt.pos_of(r, c).unwrap(), pos);
        }
    }

    #[test]
    fn generated_instances_validate(seed in any::<u64>(), alphabet in 0usize..3, k in 0usize..16, m in 1usize..32) {
        let vt = random_instance(seed, alphabet, k, m, 40);
        prop_assert!(vt.validate().ok());
        prop_assert_eq!(vt.k(), k);
        prop_assert_eq!(vt.m(), m);
    }
}
