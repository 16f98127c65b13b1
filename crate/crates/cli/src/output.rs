use std::fmt::Display;
use std::io::{self, Write};

/// One output line as ordered `key=value` pairs.
#[derive(Debug, Default, Clone)]
pub struct Record(Vec<(&'static str, String)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn kv(mut self, key: &'static str, value: impl Display) -> Self {
        self.0.push((key, value.to_string()));
        self
    }
}

/// Writes records either as `key=value` lines or, with `pretty`, as an aligned table.
pub struct Printer {
    pretty: bool,
    rows: Vec<Record>,
}

impl Printer {
    pub fn new(pretty: bool) -> Self {
        Printer {
            pretty,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, r: Record) {
        self.rows.push(r);
    }

    pub fn flush(&mut self) -> io::Result<()> {
        let out = io::stdout();
        let mut out = out.lock();
        if !self.pretty {
            for r in self.rows.drain(..) {
                let line: Vec<String> = r.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "{}", line.join(" "))?;
            }
            return Ok(());
        }
        // group consecutive rows that share a header
        let rows: Vec<Record> = self.rows.drain(..).collect();
        let mut start = 0;
        while start < rows.len() {
            let keys: Vec<&str> = rows[start].0.iter().map(|(k, _)| *k).collect();
            let mut end = start + 1;
            while end < rows.len() && rows[end].0.iter().map(|(k, _)| *k).eq(keys.iter().copied()) {
                end += 1;
            }
            let group = &rows[start..end];
            let widths: Vec<usize> = keys
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    group
                        .iter()
                        .map(|r| r.0[i].1.len())
                        .max()
                        .unwrap_or(0)
                        .max(k.len())
                })
                .collect();
            let header: Vec<String> = keys
                .iter()
                .zip(&widths)
                .map(|(k, w)| format!("{k:<w$}"))
                .collect();
            writeln!(out, "{}", header.join("  ").trim_end())?;
            for r in group {
                let cells: Vec<String> =
                    r.0.iter()
                        .zip(&widths)
                        .map(|((_, v), w)| format!("{v:<w$}"))
                        .collect();
                writeln!(out, "{}", cells.join("  ").trim_end())?;
            }
            start = end;
        }
        Ok(())
    }
}
