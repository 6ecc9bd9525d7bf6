use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};

/// Symbol written once per unit of the input.
pub const INPUT_SYMBOL: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Move {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Action {
    next: usize,
    write: usize,
    mv: Move,
}

/// Deterministic single-tape machine over a finite alphabet.
///
/// Text format, one item per line, `#` starts a comment:
///
/// ```text
/// start: q0
/// halt: H
/// blank: _          # optional, defaults to `_`
/// q0 1 -> q0 1 R
/// q0 _ -> H _ R
/// ```
///
/// Every non-halting state needs a transition for every symbol of the
/// alphabet, which is the blank, `1`, and every symbol mentioned in a
/// transition. The halting state has none. Input `k` is written as `k`
/// copies of `1` with the head on the first of them.
#[derive(Clone, PartialEq, Eq)]
pub struct TuringMachine {
    states: Vec<String>,
    symbols: Vec<String>,
    start: usize,
    halt: usize,
    blank: usize,
    one: usize,
    table: Vec<Vec<Option<Action>>>,
}

/// Result of a bounded run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunOutcome {
    pub halted: bool,
    /// Transitions taken: the halting time if `halted`, else the budget.
    pub steps: u64,
}

/// What a bounded run with configuration-repeat detection established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HaltStatus {
    Halts {
        steps: u64,
    },
    /// A configuration recurred up to translation; the machine never halts.
    Loops {
        detected_at: u64,
    },
    Unknown,
}

impl HaltStatus {
    pub fn is_known(&self) -> bool {
        !matches!(self, HaltStatus::Unknown)
    }
}

struct Builder {
    states: Vec<String>,
    state_ids: HashMap<String, usize>,
    symbols: Vec<String>,
    symbol_ids: HashMap<String, usize>,
}

impl Builder {
    fn new() -> Self {
        Self {
            states: Vec::new(),
            state_ids: HashMap::new(),
            symbols: Vec::new(),
            symbol_ids: HashMap::new(),
        }
    }

    fn state(&mut self, name: &str) -> usize {
        intern(&mut self.states, &mut self.state_ids, name)
    }

    fn symbol(&mut self, name: &str) -> usize {
        intern(&mut self.symbols, &mut self.symbol_ids, name)
    }
}

fn intern(names: &mut Vec<String>, ids: &mut HashMap<String, usize>, name: &str) -> usize {
    *ids.entry(name.to_string()).or_insert_with(|| {
        names.push(name.to_string());
        names.len() - 1
    })
}

fn machine_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Machine {
        line,
        msg: msg.into(),
    }
}

impl FromStr for TuringMachine {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut start = None;
        let mut halt = None;
        let mut blank = None;
        let mut rules = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some((key, value)) = content.split_once(':') {
                let value = value.trim();
                if value.is_empty() || value.contains(char::is_whitespace) {
                    return Err(machine_err(line, format!("bad header value `{value}`")));
                }
                let slot = match key.trim() {
                    "start" => &mut start,
                    "halt" => &mut halt,
                    "blank" => &mut blank,
                    other => return Err(machine_err(line, format!("unknown header `{other}`"))),
                };
                if slot.is_some() {
                    return Err(machine_err(
                        line,
                        format!("header `{}` repeated", key.trim()),
                    ));
                }
                *slot = Some(value.to_string());
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens.as_slice() {
                [from, read, "->", to, write, mv] => {
                    let mv = match *mv {
                        "L" => Move::L,
                        "R" => Move::R,
                        other => {
                            return Err(machine_err(
                                line,
                                format!("move must be L or R, got `{other}`"),
                            ))
                        }
                    };
                    rules.push((line, *from, *read, *to, *write, mv));
                }
                _ => {
                    return Err(machine_err(
                        line,
                        "expected `state symbol -> state symbol L|R`",
                    ))
                }
            }
        }
        let start = start.ok_or_else(|| machine_err(0, "missing `start:` header"))?;
        let halt = halt.ok_or_else(|| machine_err(0, "missing `halt:` header"))?;
        let blank = blank.unwrap_or_else(|| "_".to_string());
        if blank == INPUT_SYMBOL {
            return Err(machine_err(
                0,
                "blank must differ from the input symbol `1`",
            ));
        }

        let mut b = Builder::new();
        let start = b.state(&start);
        let halt = b.state(&halt);
        let blank = b.symbol(&blank);
        let one = b.symbol(INPUT_SYMBOL);
        let mut parsed = Vec::with_capacity(rules.len());
        for &(line, from, read, to, write, mv) in &rules {
            parsed.push((
                line,
                b.state(from),
                b.symbol(read),
                b.state(to),
                b.symbol(write),
                mv,
            ));
        }
        let mut table = vec![vec![None; b.symbols.len()]; b.states.len()];
        for (line, from, read, next, write, mv) in parsed {
            if from == halt {
                return Err(machine_err(line, "the halting state has no transitions"));
            }
            let cell = &mut table[from][read];
            if cell.is_some() {
                return Err(machine_err(
                    line,
                    format!(
                        "second transition for ({}, {})",
                        b.states[from], b.symbols[read]
                    ),
                ));
            }
            *cell = Some(Action { next, write, mv });
        }
        for (s, row) in table.iter().enumerate() {
            if s == halt {
                continue;
            }
            if let Some(sym) = row.iter().position(Option::is_none) {
                return Err(machine_err(
                    0,
                    format!("no transition for ({}, {})", b.states[s], b.symbols[sym]),
                ));
            }
        }
        Ok(Self {
            states: b.states,
            symbols: b.symbols,
            start,
            halt,
            blank,
            one,
            table,
        })
    }
}

impl fmt::Debug for TuringMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TuringMachine")
            .field("states", &self.states)
            .field("symbols", &self.symbols)
            .field("start", &self.states[self.start])
            .field("halt", &self.states[self.halt])
            .finish()
    }
}

/// A running configuration. The tape holds every visited cell.
#[derive(Clone)]
pub struct Execution<'a> {
    tm: &'a TuringMachine,
    state: usize,
    tape: VecDeque<usize>,
    head: usize,
    steps: u64,
}

impl<'a> Execution<'a> {
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn halted(&self) -> bool {
        self.state == self.tm.halt
    }

    /// Take one transition; no-op once halted. Returns `halted()`.
    pub fn step(&mut self) -> bool {
        if self.halted() {
            return true;
        }
        let sym = self.tape[self.head];
        let act = self.tm.table[self.state][sym].expect("validated at load time");
        self.tape[self.head] = act.write;
        self.state = act.next;
        match act.mv {
            Move::L => {
                if self.head == 0 {
                    self.tape.push_front(self.tm.blank);
                } else {
                    self.head -= 1;
                }
            }
            Move::R => {
                self.head += 1;
                if self.head == self.tape.len() {
                    self.tape.push_back(self.tm.blank);
                }
            }
        }
        self.steps += 1;
        self.halted()
    }

    /// Configuration up to translation of the tape: state, the written
    /// region, and the head offset from its left end.
    fn key(&self) -> (usize, Vec<usize>, i64) {
        let blank = self.tm.blank;
        let first = self.tape.iter().position(|&s| s != blank);
        match first {
            None => (self.state, Vec::new(), 0),
            Some(lo) => {
                let hi = self
                    .tape
                    .iter()
                    .rposition(|&s| s != blank)
                    .expect("non-blank exists");
                let region = self.tape.range(lo..=hi).copied().collect();
                (self.state, region, self.head as i64 - lo as i64)
            }
        }
    }
}

impl TuringMachine {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.symbols
    }

    /// Fresh configuration on unary input `k`.
    pub fn start(&self, k: u64) -> Execution<'_> {
        let mut tape: VecDeque<usize> = std::iter::repeat_n(self.one, k as usize).collect();
        tape.push_back(self.blank);
        Execution {
            tm: self,
            state: self.start,
            tape,
            head: 0,
            steps: 0,
        }
    }

    /// Simulates `min(halting time, budget)` transitions on input `k`.
    pub fn run_bounded(&self, k: u64, budget: u64) -> RunOutcome {
        let mut exec = self.start(k);
        while !exec.halted() && exec.steps() < budget {
            exec.step();
        }
        RunOutcome {
            halted: exec.halted(),
            steps: exec.steps(),
        }
    }

    /// Bounded run that also stops on a repeated configuration. A blank
    /// tape compares equal regardless of the head position, since every
    /// cell the head can reach is blank.
    pub fn resolve(&self, k: u64, budget: u64) -> HaltStatus {
        let mut exec = self.start(k);
        let mut seen = HashSet::new();
        loop {
            if exec.halted() {
                return HaltStatus::Halts {
                    steps: exec.steps(),
                };
            }
            if !seen.insert(exec.key()) {
                return HaltStatus::Loops {
                    detected_at: exec.steps(),
                };
            }
            if exec.steps() >= budget {
                return HaltStatus::Unknown;
            }
            exec.step();
        }
    }
}
