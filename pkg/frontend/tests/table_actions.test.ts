import { beforeEach, describe, expect, it, vi } from "vitest";
import { renderTable } from "../src/table.js";
import { renderActions } from "../src/actions.js";
import type { LegalAction, ViewPayload } from "../src/viewmodel.js";

function payload(view: string, overrides: Partial<ViewPayload> = {}): ViewPayload {
  return {
    view,
    legal_actions: [],
    your_turn: false,
    status: "awaiting-player",
    version: 1,
    round: 0,
    ...overrides,
  };
}

const ALLIN_VIEW = [
  "|order|p1|p2|p3 (button)|p4 (small blind)|p5 (big blind)",
  "|chip|p1: 10/990|p2: 1000/0 (all-in)|p3: 0/1000|p4: 5/995|p5: 10/990",
  "|hole|p1|H8|D1",
  "|start|blind|deal2",
  "|message|engine|p3|It's your turn to bet.",
].join("\n");

describe("renderTable", () => {
  let root: HTMLElement;
  beforeEach(() => {
    root = document.createElement("div");
    document.body.replaceChildren(root);
  });

  it("shows the all-in badge with an emptied stack", () => {
    renderTable(root, payload(ALLIN_VIEW));
    const seat = root.querySelectorAll(".seat")[1]!;
    expect(seat.querySelector(".badge.all-in")).not.toBeNull();
    expect(seat.querySelector(".chips")!.textContent).toBe("1000 / 0");
  });

  it("renders card backs for hidden hands once cards are dealt", () => {
    const spectator = ALLIN_VIEW.split("\n").filter((l) => !l.startsWith("|hole")).join("\n");
    renderTable(root, payload(spectator));
    const backs = root.querySelectorAll(".card.back");
    expect(backs.length).toBe(5);
    expect(root.querySelectorAll(".card:not(.back)").length).toBe(0);
  });

  it("highlights winners via the final announcement", () => {
    const finished = [
      "|order|p1|p2 (button, small blind)",
      "|chip|p1: 0/985|p2: 0/1015",
      "|start|blind|deal1|bet|show|prize",
      "|message|engine|all|p2 wins 30.",
    ].join("\n");
    renderTable(root, payload(finished, { status: "finished" }));
    expect(root.querySelector(".banner.announce")!.textContent).toContain("p2 wins 30.");
    expect(root.querySelector(".banner.finished")).not.toBeNull();
  });

  it("falls back to raw text when the payload cannot be parsed", () => {
    renderTable(root, payload("garbage payload"));
    expect(root.querySelector(".raw-fallback")!.textContent).toBe("garbage payload");
  });
});

describe("renderActions", () => {
  let root: HTMLElement;
  beforeEach(() => {
    root = document.createElement("div");
    document.body.replaceChildren(root);
  });

  it("renders exactly the server's action list", () => {
    const actions: LegalAction[] = [
      { kind: "call", text: "Call.", amount: 30 },
      { kind: "fold", text: "Fold." },
    ];
    renderActions(root, actions, () => {});
    const labels = [...root.querySelectorAll("button.act")].map((b) => b.textContent);
    expect(labels).toEqual(["Call.", "Fold."]);
    expect(root.querySelector(".raise-slider")).toBeNull();
  });

  it("raise slider carries the server bounds and sends the boundary value", () => {
    const sent: string[] = [];
    renderActions(root, [{ kind: "raise_to", min: 40, max: 1000 }], (a) => sent.push(a));
    const slider = root.querySelector<HTMLInputElement>(".raise-slider")!;
    expect(slider.min).toBe("40");
    expect(slider.max).toBe("1000");
    slider.value = "1000";
    slider.dispatchEvent(new Event("input"));
    (root.querySelector(".act-raise") as HTMLButtonElement).click();
    expect(sent).toEqual(["Raise to 1000."]);
  });

  it("switch with nothing selected sends the legal no-op", () => {
    const sent: string[] = [];
    renderActions(root, [{ kind: "switch", max_cards: 3, hand: ["H8", "D1", "C5"] }],
      (a) => sent.push(a));
    (root.querySelector(".act-switch") as HTMLButtonElement).click();
    expect(sent).toEqual(["Switch 0."]);
  });

  it("switch selection is capped at the server's max", () => {
    const sent: string[] = [];
    renderActions(root, [{ kind: "switch", max_cards: 2, hand: ["H8", "D1", "C5"] }],
      (a) => sent.push(a));
    const toggles = [...root.querySelectorAll<HTMLButtonElement>(".switch-card")];
    toggles.forEach((t) => t.click());
    expect(root.querySelectorAll(".switch-card.selected").length).toBe(2);
    (root.querySelector(".act-switch") as HTMLButtonElement).click();
    expect(sent).toEqual(["Switch H8 D1."]);
  });

  it("buttons are disabled while an action is in flight", () => {
    renderActions(root, [{ kind: "check", text: "Check." }], () => {}, {
      busy: true,
      error: null,
    });
    expect(root.querySelector<HTMLButtonElement>(".act-check")!.disabled).toBe(true);
  });

  it("shows the engine's rejection reason verbatim", () => {
    renderActions(root, [{ kind: "check", text: "Check." }], () => {}, {
      busy: false,
      error: "check is allowed only when the bet already matches the highest bet",
    });
    expect(root.querySelector(".action-error")!.textContent).toContain(
      "matches the highest bet",
    );
  });

  it("renders no controls when it is not the viewer's turn", () => {
    renderActions(root, [], () => {});
    expect(root.querySelectorAll("button").length).toBe(0);
    expect(root.querySelector(".waiting")).not.toBeNull();
  });
});
