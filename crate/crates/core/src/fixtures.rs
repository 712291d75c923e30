//! Built-in rules embedded as text, with hand-frozen expected verdicts.

use crate::model::{parse_fsr, ParseError, Rule, ValidationReport};

/// Verdicts the analyzers must reproduce for a built-in rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedVerdicts {
    pub esub: bool,
    pub esep: bool,
    pub vesep: bool,
    pub vsep: bool,
    pub m0comb: bool,
    pub comb_exp: bool,
    pub bounded_valence: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    pub expected: ExpectedVerdicts,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "pillow2",
        text: include_str!("../../../fixtures/pillow2.fsr"),
        expected: ExpectedVerdicts {
            esub: true,
            esep: true,
            vesep: true,
            vsep: true,
            m0comb: true,
            comb_exp: true,
            bounded_valence: true,
        },
    },
    Fixture {
        name: "columns2",
        text: include_str!("../../../fixtures/columns2.fsr"),
        expected: ExpectedVerdicts {
            esub: false,
            esep: false,
            vesep: false,
            vsep: false,
            m0comb: false,
            comb_exp: false,
            bounded_valence: true,
        },
    },
    Fixture {
        name: "barycentric",
        text: include_str!("../../../fixtures/barycentric.fsr"),
        expected: ExpectedVerdicts {
            esub: true,
            esep: true,
            vesep: true,
            vsep: true,
            m0comb: true,
            comb_exp: true,
            bounded_valence: false,
        },
    },
    Fixture {
        name: "triangles3",
        text: include_str!("../../../fixtures/triangles3.fsr"),
        expected: ExpectedVerdicts {
            esub: true,
            esep: true,
            vesep: true,
            vsep: false,
            m0comb: true,
            comb_exp: false,
            bounded_valence: false,
        },
    },
];

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture `{name}`; available: {available}")]
    Unknown { name: String, available: String },
    #[error("fixture `{name}` does not parse: {err}")]
    Parse { name: String, err: ParseError },
    #[error("fixture `{name}` does not validate:\n{report}")]
    Invalid {
        name: String,
        report: ValidationReport,
    },
}

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|fx| fx.name == name)
}

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|fx| fx.name).collect()
}

/// Parse, validate and compile a built-in rule by name.
pub fn load_fixture(name: &str) -> Result<Rule, FixtureError> {
    let fx = fixture(name).ok_or_else(|| FixtureError::Unknown {
        name: name.to_string(),
        available: fixture_names().join(", "),
    })?;
    let spec = parse_fsr(fx.text).map_err(|err| FixtureError::Parse {
        name: name.to_string(),
        err,
    })?;
    Rule::compile(&spec).map_err(|report| FixtureError::Invalid {
        name: name.to_string(),
        report,
    })
}
