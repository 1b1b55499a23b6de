//! Round-trip and shape checks on the padded token encoding.

use task_corpus::{
    corrupt_instance, decode_instance, encode_instance, find_task, gen_cases, CorpusError,
    EncodeConfig, Instance, TaskDomain, PAD,
};

fn instance_for(id: &str, n_pos: usize, n_neg: usize, seed: u64) -> Instance {
    let task = find_task(id).unwrap();
    let (positives, negatives) = gen_cases(&task, n_pos, n_neg, seed).unwrap();
    Instance {
        task_id: id.to_string(),
        positives,
        negatives,
        corruption_rate: 0.0,
    }
}

#[test]
fn encoded_shapes_match_the_domain_config() {
    let inst = instance_for("up_priority", 4, 6, 1);
    let cfg = EncodeConfig::mario();
    let enc = encode_instance(&inst, &cfg).unwrap();
    assert_eq!(enc.pos_tokens.len(), 20 * 5 * 6);
    assert_eq!(enc.neg_tokens.len(), 50 * 5 * 6);
    assert_eq!(enc.pos_mask.len(), 20 * 5);
    assert_eq!(enc.neg_mask.len(), 50 * 5);

    let inst = instance_for("cumulative_sum", 3, 5, 1);
    let cfg = EncodeConfig::mnist();
    let enc = encode_instance(&inst, &cfg).unwrap();
    assert_eq!(enc.pos_tokens.len(), 10 * 6 * 2);
    assert_eq!(enc.neg_tokens.len(), 20 * 6 * 2);
    assert_eq!(enc.pos_mask.len(), 10 * 6);
    assert_eq!(enc.neg_mask.len(), 20 * 6);
}

#[test]
fn short_cases_pad_with_masked_rows() {
    // One-step walks have exactly two states: rows 0-1 real, 2-4 padding.
    let inst = instance_for("up_one_step", 1, 1, 2);
    let cfg = EncodeConfig::mario();
    let enc = encode_instance(&inst, &cfg).unwrap();
    assert_eq!(&enc.pos_mask[..5], &[true, true, false, false, false]);
    assert!(enc.pos_tokens[..2 * 6].iter().all(|&t| t != PAD));
    assert!(enc.pos_tokens[2 * 6..5 * 6].iter().all(|&t| t == PAD));
}

#[test]
fn unused_case_slots_are_fully_masked() {
    let mut inst = instance_for("up_one_step", 1, 1, 3);
    inst.negatives.clear();
    let cfg = EncodeConfig::mario();
    let enc = encode_instance(&inst, &cfg).unwrap();
    assert!(enc.neg_mask.iter().all(|&m| !m));
    assert!(enc.neg_tokens.iter().all(|&t| t == PAD));
    // Slots past the one real positive are padding too.
    assert!(enc.pos_mask[5..].iter().all(|&m| !m));
}

#[test]
fn instances_round_trip_through_encoding() {
    let ids = [
        "up_priority",
        "bomb_far",
        "chess_jump",
        "cumulative_sum",
        "reverse_cumulative_sum",
        "increasing",
        "decreasing",
        "add_priority",
    ];
    for id in ids {
        let task = find_task(id).unwrap();
        let inst = instance_for(id, 5, 8, 17);
        let cfg = EncodeConfig::for_domain(task.domain);
        let enc = encode_instance(&inst, &cfg).unwrap();
        let back = decode_instance(&enc, &task).unwrap();
        assert_eq!(back.positives, inst.positives, "{id}");
        assert_eq!(back.negatives, inst.negatives, "{id}");
    }
}

#[test]
fn corrupted_instances_round_trip_too() {
    for id in ["up_priority", "cumulative_sum"] {
        let task = find_task(id).unwrap();
        let inst = corrupt_instance(&instance_for(id, 5, 8, 23), 0.4, 91);
        let cfg = EncodeConfig::for_domain(task.domain);
        let enc = encode_instance(&inst, &cfg).unwrap();
        let back = decode_instance(&enc, &task).unwrap();
        assert_eq!(back.positives, inst.positives, "{id}");
        assert_eq!(back.negatives, inst.negatives, "{id}");
    }
}

#[test]
fn tag_and_result_tokens_decode_by_task() {
    // A monotone tag case and a fold result case produce the same token
    // rows; the task spec passed at decode time disambiguates them.
    let tag = instance_for("increasing", 1, 1, 5);
    let cfg = EncodeConfig::mnist();
    let enc = encode_instance(&tag, &cfg).unwrap();

    let as_tag = decode_instance(&enc, &find_task("increasing").unwrap()).unwrap();
    assert_eq!(as_tag.positives, tag.positives);
    let as_result = decode_instance(&enc, &find_task("cumulative_sum").unwrap()).unwrap();
    assert_ne!(as_result.positives, tag.positives);
    assert!(as_result.positives[0].to_string().ends_with(",0)"));
}

#[test]
fn forward_and_reverse_layouts_encode_differently() {
    let fwd = instance_for("cumulative_sum", 4, 4, 29);
    let mirrored = Instance {
        task_id: "reverse_cumulative_sum".to_string(),
        positives: fwd
            .positives
            .iter()
            .map(|a| {
                let mut m = a.clone();
                m.args.reverse();
                m
            })
            .collect(),
        negatives: Vec::new(),
        corruption_rate: 0.0,
    };
    let cfg = EncodeConfig::mnist();
    let a = encode_instance(&fwd, &cfg).unwrap();
    let b = encode_instance(&mirrored, &cfg).unwrap();
    assert_ne!(a.pos_tokens, b.pos_tokens);
    // Even as row multisets (order-invariant pooling) the sides differ.
    let rows = |tokens: &[u32], mask: &[bool]| -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = mask
            .iter()
            .enumerate()
            .filter(|(_, m)| **m)
            .map(|(i, _)| tokens[i * 2..i * 2 + 2].to_vec())
            .collect();
        out.sort();
        out
    };
    assert_ne!(
        rows(&a.pos_tokens, &a.pos_mask),
        rows(&b.pos_tokens, &b.pos_mask)
    );
}

#[test]
fn out_of_range_symbols_are_rejected() {
    let task = find_task("cumulative_sum").unwrap();
    let atom = logic_core::parse_atom("f([1,12,3],6)").unwrap();
    let inst = Instance {
        task_id: task.id.to_string(),
        positives: vec![atom],
        negatives: Vec::new(),
        corruption_rate: 0.0,
    };
    assert!(matches!(
        encode_instance(&inst, &EncodeConfig::mnist()),
        Err(CorpusError::VocabularyOverflow { value: 12, .. })
    ));
}

#[test]
fn overlong_cases_are_rejected() {
    let atom = logic_core::parse_atom("f([1,2,3,4,5,6],7)").unwrap();
    let inst = Instance {
        task_id: "cumulative_sum".to_string(),
        positives: vec![atom],
        negatives: Vec::new(),
        corruption_rate: 0.0,
    };
    assert!(matches!(
        encode_instance(&inst, &EncodeConfig::mnist()),
        Err(CorpusError::CaseTooLong { .. })
    ));
}

#[test]
fn cap_overflow_is_rejected() {
    let task = find_task("cumulative_sum").unwrap();
    let (pos, _) = gen_cases(&task, 11, 1, 31).unwrap();
    let inst = Instance {
        task_id: task.id.to_string(),
        positives: pos,
        negatives: Vec::new(),
        corruption_rate: 0.0,
    };
    assert!(matches!(
        encode_instance(&inst, &EncodeConfig::mnist()),
        Err(CorpusError::CapExceeded {
            requested: 11,
            cap: 10,
            ..
        })
    ));
}

#[test]
fn domains_share_a_vocabulary_size() {
    assert_eq!(EncodeConfig::mario().vocab, 18);
    assert_eq!(EncodeConfig::mnist().vocab, 18);
    assert_eq!(
        EncodeConfig::for_domain(TaskDomain::Mario),
        EncodeConfig::mario()
    );
}
