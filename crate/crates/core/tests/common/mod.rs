#![allow(dead_code)]

use std::path::PathBuf;

use relhyp::corridor::FreeAction;
use relhyp::presentation::{parse_document, parse_loop_literal};
use relhyp::{Group, Word};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn group(name: &str) -> Group {
    let text = std::fs::read_to_string(data(name)).expect("data file");
    Group::from_document(&parse_document(&text).expect("document parses")).expect("oracle validates")
}

pub fn action(g: &Group, name: &str) -> FreeAction {
    let text = std::fs::read_to_string(data(name)).expect("action file");
    FreeAction::from_str(g.presentation(), &text).expect("action parses")
}

pub fn word(g: &Group, text: &str) -> Word {
    parse_loop_literal(g.presentation(), text).expect("literal parses")
}

/// Shipped presentation documents.
pub const EXAMPLES: [&str; 4] = ["z-example.json", "zz-free.json", "f2.json", "z2.json"];
