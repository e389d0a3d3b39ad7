//! Error classes and the exit-code contract.

use asdim_core::action::ActionError;
use asdim_core::cover::CoverError;
use asdim_core::estimate::EstimateError;
use asdim_core::group::GroupError;
use asdim_core::lift::LiftError;
use asdim_core::metric::MetricError;
use asdim_core::sspace::SSpaceError;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input or an object that fails its validator.
    Validation,
    /// Missing files, unknown ids, wrong object kinds.
    Resolution,
    /// No object with the requested properties exists.
    Infeasible,
    /// A proved postcondition failed.
    Internal,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Validation => 1,
            ErrorClass::Resolution => 2,
            ErrorClass::Infeasible => 3,
            ErrorClass::Internal => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorClass::Validation => "validation",
            ErrorClass::Resolution => "resolution",
            ErrorClass::Infeasible => "infeasible",
            ErrorClass::Internal => "internal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub class: ErrorClass,
    /// Object the error is about, when there is one.
    pub object: Option<String>,
    pub message: String,
    pub details: Vec<Value>,
}

impl CliError {
    pub fn new(class: ErrorClass, message: impl Into<String>) -> Self {
        CliError { class, object: None, message: message.into(), details: Vec::new() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(ErrorClass::Validation, message)
    }

    pub fn resolution(message: impl Into<String>) -> Self {
        Self::new(ErrorClass::Resolution, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(ErrorClass::Internal, message)
    }

    pub fn about(mut self, object: impl Into<String>) -> Self {
        self.object.get_or_insert_with(|| object.into());
        self
    }

    pub fn with_details(mut self, details: Vec<Value>) -> Self {
        self.details = details;
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.class.exit_code()
    }

    /// One structured report line.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "level": "error",
            "class": self.class.name(),
            "exit_code": self.exit_code(),
            "message": self.message,
        });
        if let Some(o) = &self.object {
            v["object"] = json!(o);
        }
        if !self.details.is_empty() {
            v["details"] = json!(self.details);
        }
        v
    }
}

macro_rules! classify {
    ($ty:ty, |$e:ident| $body:expr) => {
        impl From<$ty> for CliError {
            fn from($e: $ty) -> Self {
                let class = $body;
                CliError::new(class, $e.to_string())
            }
        }
    };
}

classify!(MetricError, |e| ErrorClass::Validation);
classify!(GroupError, |e| ErrorClass::Validation);
classify!(ActionError, |e| ErrorClass::Validation);
classify!(CoverError, |e| match e {
    CoverError::Internal(_) => ErrorClass::Internal,
    _ => ErrorClass::Validation,
});
classify!(LiftError, |e| match &e {
    LiftError::Internal(_) => ErrorClass::Internal,
    LiftError::Cover(CoverError::Internal(_)) => ErrorClass::Internal,
    _ => ErrorClass::Validation,
});
classify!(SSpaceError, |e| match e {
    SSpaceError::Internal(_) => ErrorClass::Internal,
    _ => ErrorClass::Validation,
});
classify!(EstimateError, |e| match &e {
    EstimateError::Infeasible { .. } => ErrorClass::Infeasible,
    EstimateError::Internal(_) => ErrorClass::Internal,
    EstimateError::Lift(LiftError::Internal(_)) => ErrorClass::Internal,
    _ => ErrorClass::Validation,
});
