//! Session transcripts: an append-only, totally ordered record of every
//! message that crosses a channel, used by distinguishers and audit dumps.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Endpoints that can appear on a channel.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Party {
    Alice,
    Bob,
    Source,
    OracleH1,
    OracleH2,
    Eve,
}

impl Party {
    pub fn as_str(self) -> &'static str {
        match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
            Party::Source => "source",
            Party::OracleH1 => "h1",
            Party::OracleH2 => "h2",
            Party::Eve => "eve",
        }
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alice" => Ok(Party::Alice),
            "bob" => Ok(Party::Bob),
            "source" => Ok(Party::Source),
            "h1" => Ok(Party::OracleH1),
            "h2" => Ok(Party::OracleH2),
            "eve" => Ok(Party::Eve),
            other => Err(Error::invalid(format!("unknown party {other:?}"))),
        }
    }
}

/// Which kind of channel an event crossed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Channel {
    Classical,
    QuantumHalfDelivery,
    Oracle,
}

impl Channel {
    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Classical => "classical",
            Channel::QuantumHalfDelivery => "quantum-half-delivery",
            Channel::Oracle => "oracle",
        }
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Channel::Classical),
            "quantum-half-delivery" => Ok(Channel::QuantumHalfDelivery),
            "oracle" => Ok(Channel::Oracle),
            other => Err(Error::invalid(format!("unknown channel {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EventKind {
    HalfDelivery,
    Commit,
    Receipt,
    Open,
    OracleQuery,
    OracleResponse,
    Abort,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::HalfDelivery => "half_delivery",
            EventKind::Commit => "commit",
            EventKind::Receipt => "receipt",
            EventKind::Open => "open",
            EventKind::OracleQuery => "query",
            EventKind::OracleResponse => "response",
            EventKind::Abort => "abort",
        }
    }
}

impl FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half_delivery" => Ok(EventKind::HalfDelivery),
            "commit" => Ok(EventKind::Commit),
            "receipt" => Ok(EventKind::Receipt),
            "open" => Ok(EventKind::Open),
            "query" => Ok(EventKind::OracleQuery),
            "response" => Ok(EventKind::OracleResponse),
            "abort" => Ok(EventKind::Abort),
            other => Err(Error::invalid(format!("unknown event kind {other:?}"))),
        }
    }
}

/// One message crossing a channel. Payloads are canonical bytes (bit
/// strings packed MSB-first), so transcripts compare and export exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Event {
    pub tick: u64,
    pub from: Party,
    pub to: Party,
    pub channel: Channel,
    pub kind: EventKind,
    pub payload: Vec<u8>,
}

impl Event {
    pub fn direction(&self) -> String {
        format!("{}->{}", self.from.as_str(), self.to.as_str())
    }
}

/// Append-only ordered event log for one session.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn new() -> Self {
        Transcript::default()
    }

    /// Appends an event; the tick is the session's running total order.
    pub fn record(
        &mut self,
        from: Party,
        to: Party,
        channel: Channel,
        kind: EventKind,
        payload: Vec<u8>,
    ) {
        let tick = self.events.len() as u64;
        self.events.push(Event {
            tick,
            from,
            to,
            channel,
            kind,
            payload,
        });
    }

    /// Re-appends a parsed event; ticks must arrive in order.
    pub fn push_event(&mut self, event: Event) -> Result<()> {
        if event.tick != self.events.len() as u64 {
            return Err(Error::invalid(format!(
                "event tick {} out of order (expected {})",
                event.tick,
                self.events.len()
            )));
        }
        self.events.push(event);
        Ok(())
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Event> {
        self.events.iter()
    }

    /// Index of the first event matching `kind`, if any.
    pub fn first_index_of(&self, kind: EventKind) -> Option<usize> {
        self.events.iter().position(|e| e.kind == kind)
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(
                f,
                "[{}] {} {} {}: {} bytes",
                e.tick,
                e.direction(),
                e.channel.as_str(),
                e.kind.as_str(),
                e.payload.len()
            )?;
        }
        Ok(())
    }
}

/// Audit flags raised by simulators, functionalities, and channels.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SessionFlag {
    /// A corrupted receiver hit the to-be-programmed oracle point before
    /// the simulator learned the committed message.
    PrematureProgramPoint,
    /// The sender simulator found no logged preimage of `c2` to extract
    /// a basis string from.
    ExtractionMiss,
    /// Two logged queries shared the response `c2`; the earliest was used.
    AmbiguousExtraction,
    /// The tamper-evident channel detected modification or source
    /// substitution.
    AuthFailure,
    /// The EPR source received a second request with a different size;
    /// the first distribution stands.
    MismatchedEprRequest,
}

impl SessionFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            SessionFlag::PrematureProgramPoint => "premature-program-point",
            SessionFlag::ExtractionMiss => "extraction-miss",
            SessionFlag::AmbiguousExtraction => "ambiguous-extraction",
            SessionFlag::AuthFailure => "auth-failure",
            SessionFlag::MismatchedEprRequest => "mismatched-epr-request",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_follow_append_order() {
        let mut t = Transcript::new();
        t.record(
            Party::Alice,
            Party::Bob,
            Channel::Classical,
            EventKind::Commit,
            vec![1, 2],
        );
        t.record(
            Party::Bob,
            Party::Alice,
            Channel::Classical,
            EventKind::Receipt,
            vec![],
        );
        assert_eq!(t.events()[0].tick, 0);
        assert_eq!(t.events()[1].tick, 1);
        assert_eq!(t.events()[0].direction(), "alice->bob");
    }

    #[test]
    fn push_event_rejects_out_of_order_tick() {
        let mut t = Transcript::new();
        let e = Event {
            tick: 3,
            from: Party::Alice,
            to: Party::Bob,
            channel: Channel::Classical,
            kind: EventKind::Open,
            payload: vec![],
        };
        assert!(t.push_event(e).is_err());
    }
}
