// Minimal line-splitter over the server's view payload. The client never
// infers hidden information and holds no game rules: everything rendered
// comes straight from the payload, and anything unparseable falls back to
// the raw text so play is never blocked.

export interface SeatView {
  id: string;
  roles: string[];
  bet: number;
  stack: number;
  allIn: boolean;
  folded: boolean;
  cards: string[] | null; // null = hidden from this viewer
}

export interface ViewMessage {
  from: string;
  to: string;
  text: string;
}

export interface TableViewModel {
  seats: SeatView[];
  community: string[];
  pot: number;
  trace: string[];
  dealt: boolean;
  showdown: boolean;
  message: ViewMessage | null;
  parseOk: boolean;
  raw: string;
}

export type LegalAction =
  | { kind: "check"; text: string }
  | { kind: "call"; text: string; amount: number }
  | { kind: "raise_to"; min: number; max: number }
  | { kind: "fold"; text: string }
  | { kind: "all_in"; text: string }
  | { kind: "switch"; max_cards: number; hand: string[] };

export interface ViewPayload {
  view: string;
  legal_actions: LegalAction[];
  your_turn: boolean;
  status: string;
  version: number;
  round: number;
}

const CHIP_ENTRY = /^(p\d+): (\d+)\/(\d+)( \((?:all-in|folded)\))?$/;

export function parseView(text: string): TableViewModel {
  const vm: TableViewModel = {
    seats: [],
    community: [],
    pot: 0,
    trace: [],
    dealt: false,
    showdown: false,
    message: null,
    parseOk: true,
    raw: text,
  };
  const holes = new Map<string, string[]>();
  try {
    for (const line of text.split("\n")) {
      if (!line.startsWith("|")) throw new Error(`bad line: ${line}`);
      const parts = line.slice(1).split("|");
      const key = parts[0];
      if (key === "order") {
        for (const entry of parts.slice(1)) {
          const m = entry.match(/^(p\d+)(?: \(([^)]*)\))?$/);
          if (!m) throw new Error(`bad seat: ${entry}`);
          vm.seats.push({
            id: m[1],
            roles: m[2] ? m[2].split(", ") : [],
            bet: 0,
            stack: 0,
            allIn: false,
            folded: false,
            cards: null,
          });
        }
      } else if (key === "chip") {
        for (const entry of parts.slice(1)) {
          const m = entry.match(CHIP_ENTRY);
          if (!m) throw new Error(`bad chip entry: ${entry}`);
          const seat = vm.seats.find((s) => s.id === m[1]);
          if (!seat) throw new Error(`chips for unknown seat ${m[1]}`);
          seat.bet = parseInt(m[2], 10);
          seat.stack = parseInt(m[3], 10);
          seat.allIn = m[4] === " (all-in)";
          seat.folded = m[4] === " (folded)";
          vm.pot += seat.bet;
        }
      } else if (key === "hole") {
        let current: string[] | null = null;
        for (const tok of parts.slice(1)) {
          if (/^p\d+$/.test(tok)) {
            current = [];
            holes.set(tok, current);
          } else if (current) {
            current.push(tok);
          } else {
            throw new Error("hole cards before a player id");
          }
        }
      } else if (key === "community") {
        vm.community = parts.slice(1);
      } else if (key === "message") {
        vm.message = { from: parts[1], to: parts[2], text: parts.slice(3).join("|") };
      } else if (key === "stack") {
        // never sent in views; tolerated for reuse on full states
      } else {
        vm.trace = parts;
      }
    }
    if (vm.seats.length === 0 || vm.trace.length === 0) {
      throw new Error("payload misses the order or trace line");
    }
  } catch {
    vm.parseOk = false;
    return vm;
  }
  for (const [pid, cards] of holes) {
    const seat = vm.seats.find((s) => s.id === pid);
    if (seat) seat.cards = cards;
  }
  vm.dealt = vm.trace.some((t) => t.startsWith("deal"));
  vm.showdown = vm.trace.includes("show");
  return vm;
}

export function raiseBounds(actions: LegalAction[]): { min: number; max: number } | null {
  for (const a of actions) {
    if (a.kind === "raise_to") return { min: a.min, max: a.max };
  }
  return null;
}
