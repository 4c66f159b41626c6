use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure{}: {source}", at_row(*.row, *.param))]
    Numerical {
        row: Option<usize>,
        param: Option<f64>,
        #[source]
        source: superrad_core::Error,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn at_row(row: Option<usize>, param: Option<f64>) -> String {
    match (row, param) {
        (Some(r), Some(p)) => format!(" at row {r} (param = {p})"),
        (Some(r), None) => format!(" at row {r}"),
        _ => String::new(),
    }
}

impl CliError {
    pub fn config(path: &str, msg: impl std::fmt::Display) -> Self {
        if path.is_empty() {
            Self::Config(msg.to_string())
        } else {
            Self::Config(format!("{path}: {msg}"))
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical { .. } => 3,
            Self::Io(_) => 1,
        }
    }
}
