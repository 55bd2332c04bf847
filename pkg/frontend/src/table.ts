// Table rendering: pure view over the parsed payload. Zero poker logic
// lives here; badges and card chips mirror payload fields one for one.

import { parseView, TableViewModel, ViewPayload } from "./viewmodel.js";

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function cardChip(text: string): HTMLElement {
  const suit = text[0];
  const chip = el("span", `card suit-${suit.toLowerCase()}`, text);
  return chip;
}

function cardBack(): HTMLElement {
  return el("span", "card back", "?");
}

export function renderTable(container: HTMLElement, payload: ViewPayload): TableViewModel {
  const vm = parseView(payload.view);
  container.replaceChildren();

  if (!vm.parseOk) {
    // Raw fallback: show exactly what the server said and keep playing.
    const pre = el("pre", "raw-fallback", vm.raw);
    container.append(pre);
    return vm;
  }

  const table = el("div", "table");
  const seats = el("div", "seats");
  for (const seat of vm.seats) {
    const classes = ["seat"];
    if (seat.folded) classes.push("folded");
    if (vm.message && vm.message.to === seat.id && vm.message.from === "engine") {
      classes.push("to-act");
    }
    const box = el("div", classes.join(" "));
    const head = el("div", "seat-head");
    head.append(el("span", "seat-name", seat.id));
    for (const role of seat.roles) {
      head.append(el("span", "badge role", role));
    }
    if (seat.allIn) head.append(el("span", "badge all-in", "all-in"));
    if (seat.folded) head.append(el("span", "badge folded", "folded"));
    box.append(head);
    box.append(el("div", "chips", `${seat.bet} / ${seat.stack}`));
    const hand = el("div", "hand");
    if (seat.cards) {
      for (const c of seat.cards) hand.append(cardChip(c));
    } else if (vm.dealt && !seat.folded && !vm.showdown) {
      hand.append(cardBack());
    }
    box.append(hand);
    seats.append(box);
  }
  table.append(seats);

  const middle = el("div", "middle");
  middle.append(el("div", "pot", `pot ${vm.pot}`));
  const community = el("div", "community");
  for (const c of vm.community) community.append(cardChip(c));
  middle.append(community);
  middle.append(el("div", "trace", vm.trace.join(" → ")));
  table.append(middle);

  if (vm.message) {
    const cls = vm.message.to === "all" ? "banner announce" : "banner prompt";
    table.append(el("div", cls, `${vm.message.from} → ${vm.message.to}: ${vm.message.text}`));
  }
  if (payload.status === "finished") {
    table.append(el("div", "banner finished", "round finished"));
  }
  container.append(table);
  return vm;
}
