//! The public record of a protocol session.
//!
//! Text form:
//!
//! ```text
//! # protocol decomp
//! # platform matrix n=4 p=5
//! # public w <payload>
//! 1 Alice msg <payload>
//! 2 Bob msg <payload>
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::platform::{Element, Platform};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Party {
    Alice,
    Bob,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "Alice",
            Party::Bob => "Bob",
        })
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Alice" => Ok(Party::Alice),
            "Bob" => Ok(Party::Bob),
            _ => Err(Error::Parse(format!("unknown party `{s}`"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Record {
    pub seq: usize,
    pub sender: Party,
    pub label: String,
    pub payload: Element,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transcript {
    protocol: String,
    platform: Platform,
    public: Vec<(String, Element)>,
    records: Vec<Record>,
}

fn check_label(label: &str) -> Result<()> {
    if label.is_empty() || label.contains(char::is_whitespace) {
        return Err(Error::Parse(format!("label `{label}` must be a nonempty token")));
    }
    Ok(())
}

impl Transcript {
    pub fn new(protocol: &str, platform: Platform) -> Self {
        Self { protocol: protocol.to_string(), platform, public: Vec::new(), records: Vec::new() }
    }

    /// Records a public parameter agreed before the exchange.
    pub fn publish(&mut self, label: &str, e: &Element) {
        check_label(label).expect("static label");
        assert!(self.platform.owns(e), "public value not on the transcript platform");
        self.public.push((label.to_string(), e.clone()));
    }

    /// Appends a message; sequence numbers count from 1.
    pub fn send(&mut self, sender: Party, label: &str, e: &Element) {
        check_label(label).expect("static label");
        assert!(self.platform.owns(e), "message not on the transcript platform");
        let seq = self.records.len() + 1;
        self.records.push(Record { seq, sender, label: label.to_string(), payload: e.clone() });
    }

    pub fn protocol(&self) -> &str {
        &self.protocol
    }

    pub fn platform(&self) -> &Platform {
        &self.platform
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn public(&self) -> &[(String, Element)] {
        &self.public
    }

    /// First public value with this label.
    pub fn public_value(&self, label: &str) -> Result<&Element> {
        self.public
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::Parse(format!("transcript has no public `{label}`")))
    }

    /// All public values with this label, in order.
    pub fn public_values(&self, label: &str) -> Vec<Element> {
        self.public.iter().filter(|(l, _)| l == label).map(|(_, e)| e.clone()).collect()
    }

    /// Payloads sent by `sender` under `label`, in order.
    pub fn messages(&self, sender: Party, label: &str) -> Vec<Element> {
        self.records.iter().filter(|r| r.sender == sender && r.label == label).map(|r| r.payload.clone()).collect()
    }

    pub fn message(&self, sender: Party, label: &str) -> Result<Element> {
        self.messages(sender, label)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Parse(format!("transcript has no {sender} message `{label}`")))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# protocol {}\n# platform {}\n", self.protocol, self.platform);
        for (l, e) in &self.public {
            out.push_str(&format!("# public {l} {e}\n"));
        }
        for r in &self.records {
            out.push_str(&format!("{} {} {} {}\n", r.seq, r.sender, r.label, r.payload));
        }
        out
    }

    /// Total serialized payload bytes of the messages.
    pub fn message_bytes(&self) -> usize {
        self.records.iter().map(|r| r.payload.to_string().len()).sum()
    }
}

impl FromStr for Transcript {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut protocol = None;
        let mut platform: Option<Platform> = None;
        let mut public = Vec::new();
        let mut records = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            if let Some(rest) = line.strip_prefix("# protocol ") {
                protocol = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("# platform ") {
                platform = Some(rest.parse()?);
            } else if let Some(rest) = line.strip_prefix("# public ") {
                let pf = platform.as_ref().ok_or_else(|| Error::Parse("public value before platform".into()))?;
                let (label, payload) =
                    rest.split_once(' ').ok_or_else(|| Error::Parse(format!("bad public line `{line}`")))?;
                public.push((label.to_string(), pf.parse_element(payload)?));
            } else if line.starts_with('#') {
                continue;
            } else {
                let pf = platform.as_ref().ok_or_else(|| Error::Parse("record before platform".into()))?;
                let mut parts = line.splitn(4, ' ');
                let bad = || Error::Parse(format!("bad record `{line}`"));
                let seq: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let sender: Party = parts.next().ok_or_else(bad)?.parse()?;
                let label = parts.next().ok_or_else(bad)?.to_string();
                let payload = pf.parse_element(parts.next().ok_or_else(bad)?)?;
                if seq != records.len() + 1 {
                    return Err(Error::Parse(format!("sequence number {seq} out of order")));
                }
                records.push(Record { seq, sender, label, payload });
            }
        }
        Ok(Transcript {
            protocol: protocol.ok_or_else(|| Error::Parse("missing `# protocol` header".into()))?,
            platform: platform.ok_or_else(|| Error::Parse("missing `# platform` header".into()))?,
            public,
            records,
        })
    }
}
