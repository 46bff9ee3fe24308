use std::fs;
use std::io::{self, Write};

use serde::Serialize;

use crate::{Cli, Format};

/// One command result in all three output formats.
pub struct Rendered {
    pub json: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
}

impl Rendered {
    pub fn new(payload: &impl Serialize) -> serde_json::Result<Rendered> {
        Ok(Rendered {
            json: serde_json::to_string_pretty(payload)?,
            header: Vec::new(),
            rows: Vec::new(),
            text: String::new(),
        })
    }

    pub fn table<S: ToString>(mut self, header: &[S], rows: Vec<Vec<String>>) -> Rendered {
        self.header = header.iter().map(ToString::to_string).collect();
        self.rows = rows;
        self
    }

    pub fn text(mut self, text: String) -> Rendered {
        self.text = text;
        self
    }

    fn csv(&self) -> Result<Vec<u8>, Box<dyn std::error::Error>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        Ok(w.into_inner()?)
    }

    pub fn emit(&self, cli: &Cli) -> Result<(), Box<dyn std::error::Error>> {
        let bytes = match cli.format {
            Format::Json => format!("{}\n", self.json).into_bytes(),
            Format::Csv => self.csv()?,
            Format::Text => self.text.clone().into_bytes(),
        };
        match &cli.out {
            Some(path) => fs::write(path, bytes)?,
            None => io::stdout().lock().write_all(&bytes)?,
        }
        Ok(())
    }
}
