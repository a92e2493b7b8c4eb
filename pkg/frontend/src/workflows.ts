// The three annotation workflows as plain-DOM views. Event handlers call
// the same public methods the tests drive, so exercising a view through
// DOM events and through its API covers identical code paths.
//
// Annotators only ever see base documents and their own draft; nothing
// from other annotators is rendered.

import { AnnotationApi, ConflictError, ValidationError } from "./api.js";
import { renderPattern } from "./render.js";
import {
  WorkspaceDraft,
  clearDraft,
  emptyDraft,
  loadDraft,
  saveDraft,
  slotToFiller,
} from "./state.js";
import type {
  CounterargumentDoc,
  Extractability,
  FreeTextTask,
  JudgingTask,
  SubmissionPayload,
  SubmitAck,
  Task,
  TemplateApplicationTask,
  TemplateDoc,
  TemplateSetDoc,
  TopicDoc,
} from "./types.js";
import { NOT_APPLICABLE } from "./types.js";
import {
  validateFreeText,
  validateJudgment,
  validateTemplateApplication,
} from "./validate.js";

export interface WorkflowCallbacks {
  onSubmitted?: (ack: SubmitAck) => void;
  onConflict?: (message: string) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

abstract class WorkflowView {
  readonly root: HTMLElement;
  protected errorBox: HTMLElement;
  protected submitButton: HTMLButtonElement;
  protected draft: WorkspaceDraft;

  constructor(
    protected api: AnnotationApi,
    protected itemId: string,
    protected revision: number,
    protected callbacks: WorkflowCallbacks = {},
  ) {
    this.root = el("section", "task");
    this.errorBox = el("p", "error");
    this.errorBox.hidden = true;
    this.submitButton = el("button", "submit", "Submit");
    this.submitButton.type = "button";
    this.submitButton.addEventListener("click", () => {
      void this.submit();
    });
    this.draft = loadDraft(api.projectId, itemId) ?? emptyDraft();
  }

  protected abstract buildPayload(): SubmissionPayload;

  abstract validationProblems(): string[];

  protected persistDraft(): void {
    saveDraft(this.api.projectId, this.itemId, this.draft);
  }

  protected refreshGate(): void {
    const problems = this.validationProblems();
    this.submitButton.disabled = problems.length > 0;
    this.submitButton.title = problems.join("; ");
  }

  protected showError(message: string): void {
    this.errorBox.textContent = message;
    this.errorBox.hidden = false;
  }

  async submit(): Promise<SubmitAck | null> {
    const problems = this.validationProblems();
    if (problems.length > 0) {
      this.showError(problems.join("; "));
      return null;
    }
    try {
      const ack = await this.api.submit(this.itemId, this.revision, this.buildPayload());
      clearDraft(this.api.projectId, this.itemId);
      this.callbacks.onSubmitted?.(ack);
      return ack;
    } catch (error) {
      if (error instanceof ConflictError) {
        this.showError("This task changed elsewhere; refreshing.");
        this.callbacks.onConflict?.(error.message);
      } else if (error instanceof ValidationError) {
        this.showError(error.message);
      } else {
        this.showError(String(error));
      }
      return null;
    }
  }
}

// ---------------------------------------------------------------------------
// shared document rendering

function renderTopic(topic: TopicDoc): HTMLElement {
  const box = el("div", "topic");
  box.appendChild(el("h3", "motion", topic.motion));
  const list = el("ol", "points");
  for (const point of topic.points) {
    const item = el("li", "point", point.text);
    item.dataset.pointId = point.id;
    list.appendChild(item);
  }
  box.appendChild(list);
  return box;
}

function sentenceSpans(ca: CounterargumentDoc): HTMLElement[] {
  return ca.sentences.map(([start, end], index) => {
    const span = el("span", "sentence", ca.text.slice(start, end));
    span.dataset.index = String(index);
    span.dataset.start = String(start);
    span.dataset.end = String(end);
    return span;
  });
}

// ---------------------------------------------------------------------------
// free-text diagnosis

export class FreeTextWorkflow extends WorkflowView {
  private textarea: HTMLTextAreaElement;
  private sentences: HTMLElement[];

  constructor(
    api: AnnotationApi,
    readonly task: FreeTextTask,
    callbacks: WorkflowCallbacks = {},
  ) {
    super(api, task.item_id, task.revision, callbacks);
    this.root.appendChild(renderTopic(task.topic));

    const doc = el("p", "counterargument");
    this.sentences = sentenceSpans(task.counterargument);
    this.sentences.forEach((span, index) => {
      span.classList.add("selectable");
      span.addEventListener("click", () => this.toggleSentence(index));
      doc.appendChild(span);
      doc.appendChild(document.createTextNode(" "));
    });
    this.root.appendChild(doc);

    this.textarea = el("textarea", "comment-input");
    this.textarea.placeholder = "Diagnose the selected sentences";
    this.textarea.addEventListener("input", () => {
      this.draft.commentText = this.textarea.value;
      this.persistDraft();
      this.refreshGate();
    });
    this.root.appendChild(this.textarea);
    this.root.appendChild(this.errorBox);
    this.root.appendChild(this.submitButton);

    this.textarea.value = this.draft.commentText;
    for (const index of this.draft.selectedSentences) {
      this.sentences[index]?.classList.add("selected");
    }
    this.refreshGate();
  }

  toggleSentence(index: number): void {
    const selected = new Set(this.draft.selectedSentences);
    if (selected.has(index)) {
      selected.delete(index);
      this.sentences[index]?.classList.remove("selected");
    } else {
      selected.add(index);
      this.sentences[index]?.classList.add("selected");
    }
    this.draft.selectedSentences = [...selected].sort((a, b) => a - b);
    this.persistDraft();
    this.refreshGate();
  }

  setComment(text: string): void {
    this.textarea.value = text;
    this.textarea.dispatchEvent(new Event("input"));
  }

  override validationProblems(): string[] {
    return validateFreeText(
      { target: this.draft.selectedSentences, text: this.draft.commentText },
      this.task.counterargument.sentences.length,
    );
  }

  protected override buildPayload(): SubmissionPayload {
    return { target: this.draft.selectedSentences, text: this.draft.commentText };
  }
}

// ---------------------------------------------------------------------------
// template application

interface ExtractionAnchor {
  docKind: "counterargument" | "point";
  docId: string;
  start: number;
  end: number;
}

export class TemplateApplicationWorkflow extends WorkflowView {
  private templatesById = new Map<string, TemplateDoc>();
  private locale: string;
  private slotInputs = new Map<string, HTMLInputElement>();
  private slotModes = new Map<string, HTMLSelectElement>();
  private armedSlot: string | null = null;
  private anchor: ExtractionAnchor | null = null;
  private picker: HTMLSelectElement;
  private slotBox: HTMLElement;
  private previewBox: HTMLElement;
  private documentTexts = new Map<string, string>();

  constructor(
    api: AnnotationApi,
    readonly task: TemplateApplicationTask,
    templateSet: TemplateSetDoc,
    locale = "en",
    callbacks: WorkflowCallbacks = {},
  ) {
    super(api, task.item_id, task.revision, callbacks);
    this.locale = locale;
    for (const template of templateSet.templates) {
      this.templatesById.set(template.id, template);
    }

    this.documentTexts.set(`counterargument/${task.counterargument.id}`, task.counterargument.text);
    for (const point of task.topic.points) {
      this.documentTexts.set(`point/${task.topic.id}/${point.id}`, point.text);
    }

    // Original argument: its points are extraction sources too.
    const topicBox = el("div", "topic");
    topicBox.appendChild(el("h3", "motion", task.topic.motion));
    const pointList = el("ol", "points");
    for (const point of task.topic.points) {
      const item = el("li", "point", point.text);
      item.dataset.pointId = point.id;
      this.attachExtraction(item, "point", `${task.topic.id}/${point.id}`);
      pointList.appendChild(item);
    }
    topicBox.appendChild(pointList);
    this.root.appendChild(topicBox);

    const doc = el("p", "counterargument");
    const targets = new Set(task.comment.target);
    sentenceSpans(task.counterargument).forEach((span, index) => {
      if (targets.has(index)) span.classList.add("target");
      this.attachExtraction(span, "counterargument", task.counterargument.id);
      doc.appendChild(span);
      doc.appendChild(document.createTextNode(" "));
    });
    this.root.appendChild(doc);

    const commentBox = el("blockquote", "free-comment", task.comment.text);
    this.root.appendChild(commentBox);

    this.picker = this.buildPicker();
    this.root.appendChild(this.picker);
    this.slotBox = el("div", "slots");
    this.root.appendChild(this.slotBox);
    this.previewBox = el("p", "preview");
    this.root.appendChild(this.previewBox);
    this.root.appendChild(this.errorBox);
    this.root.appendChild(this.submitButton);

    if (this.draft.selectedLabel) {
      this.picker.value = this.draft.selectedLabel;
      this.rebuildSlots();
    }
    this.refreshPreview();
    this.refreshGate();
  }

  private buildPicker(): HTMLSelectElement {
    const picker = el("select", "template-picker");
    const placeholder = el("option", undefined, "choose a template");
    placeholder.value = "";
    placeholder.disabled = true;
    placeholder.selected = true;
    picker.appendChild(placeholder);

    const byDimension = new Map<string, TemplateDoc[]>();
    for (const template of this.templatesById.values()) {
      const group = byDimension.get(template.dimension) ?? [];
      group.push(template);
      byDimension.set(template.dimension, group);
    }
    for (const [dimension, templates] of byDimension) {
      const group = el("optgroup") as HTMLOptGroupElement;
      group.label = dimension;
      for (const template of templates) {
        const option = el("option");
        option.value = template.id;
        option.textContent = `${template.id}: ${renderPattern(
          template.surface_forms[this.locale] ?? "",
          {},
        )}`;
        group.appendChild(option);
      }
      picker.appendChild(group);
    }
    const na = el("option", "not-applicable", NOT_APPLICABLE);
    na.value = NOT_APPLICABLE;
    picker.appendChild(na);

    picker.addEventListener("change", () => this.chooseLabel(picker.value));
    return picker;
  }

  private attachExtraction(
    span: HTMLElement,
    docKind: "counterargument" | "point",
    docId: string,
  ): void {
    // Word-level drag selection: mousedown on the first word, mouseup on
    // the last. Each word carries its character offsets into the document.
    const text = span.textContent ?? "";
    const base = Number(span.dataset.start ?? 0);
    span.textContent = "";
    const wordPattern = /\S+/g;
    let match: RegExpExecArray | null;
    let cursor = 0;
    while ((match = wordPattern.exec(text)) !== null) {
      if (match.index > cursor) {
        span.appendChild(document.createTextNode(text.slice(cursor, match.index)));
      }
      const word = el("span", "word", match[0]);
      const start = base + match.index;
      const end = start + match[0].length;
      word.dataset.start = String(start);
      word.dataset.end = String(end);
      word.addEventListener("mousedown", () => {
        this.anchor = { docKind, docId, start, end };
      });
      word.addEventListener("mouseup", () => {
        if (!this.anchor || this.anchor.docKind !== docKind || this.anchor.docId !== docId) {
          this.anchor = null;
          return;
        }
        const from = Math.min(this.anchor.start, start);
        const to = Math.max(this.anchor.end, end);
        this.anchor = null;
        if (this.armedSlot) this.extract(this.armedSlot, docKind, docId, from, to);
      });
      span.appendChild(word);
      cursor = match.index + match[0].length;
    }
    if (cursor < text.length) {
      span.appendChild(document.createTextNode(text.slice(cursor)));
    }
  }

  selectedTemplate(): TemplateDoc | null {
    const label = this.draft.selectedLabel;
    if (!label || label === NOT_APPLICABLE) return null;
    return this.templatesById.get(label) ?? null;
  }

  chooseLabel(label: string): void {
    this.draft.selectedLabel = label;
    const template = this.selectedTemplate();
    const keep = new Set(template?.slots ?? []);
    for (const slot of Object.keys(this.draft.slots)) {
      if (!keep.has(slot)) delete this.draft.slots[slot];
    }
    this.picker.value = label;
    this.rebuildSlots();
    this.persistDraft();
    this.refreshPreview();
    this.refreshGate();
  }

  private rebuildSlots(): void {
    this.slotBox.textContent = "";
    this.slotInputs.clear();
    this.slotModes.clear();
    this.armedSlot = null;
    const template = this.selectedTemplate();
    if (!template) return;

    for (const slot of template.slots) {
      const row = el("div", "slot-row");
      row.appendChild(el("label", "slot-name", slot));

      const input = el("input", "slot-text") as HTMLInputElement;
      input.type = "text";
      input.value = this.draft.slots[slot]?.text ?? "";
      input.addEventListener("input", () => this.typeSlot(slot, input.value));
      this.slotInputs.set(slot, input);
      row.appendChild(input);

      const mode = el("select", "slot-mode") as HTMLSelectElement;
      for (const [value, labelText] of [
        ["not_extractable", "typed: new content"],
        ["extractable_with_changes", "typed: based on the text"],
      ] as const) {
        const option = el("option", undefined, labelText);
        option.value = value;
        mode.appendChild(option);
      }
      mode.value = this.draft.slots[slot]?.sourceSpan
        ? "not_extractable"
        : (this.draft.slots[slot]?.extractability ?? "not_extractable");
      mode.addEventListener("change", () => {
        const draft = this.draft.slots[slot];
        if (draft && draft.extractability !== "extractable") {
          draft.extractability = mode.value as Extractability;
          this.persistDraft();
          this.refreshGate();
        }
      });
      this.slotModes.set(slot, mode);
      row.appendChild(mode);

      const arm = el("button", "arm", `extract from text into ${slot}`);
      arm.type = "button";
      arm.addEventListener("click", () => this.armSlot(slot));
      row.appendChild(arm);

      this.slotBox.appendChild(row);
    }
  }

  armSlot(slot: string): void {
    this.armedSlot = slot;
    for (const [name, input] of this.slotInputs) {
      input.classList.toggle("armed", name === slot);
    }
  }

  /** Fill a slot from a document span, recording provenance. */
  extract(
    slot: string,
    docKind: "counterargument" | "point",
    docId: string,
    start: number,
    end: number,
  ): void {
    const key = docKind === "point" ? `point/${docId}` : `counterargument/${docId}`;
    const text = this.documentTexts.get(key)?.slice(start, end) ?? "";
    this.draft.slots[slot] = {
      text,
      extractability: "extractable",
      sourceSpan: { doc_kind: docKind, doc_id: docId, start, end },
    };
    const input = this.slotInputs.get(slot);
    if (input) input.value = text;
    this.persistDraft();
    this.refreshPreview();
    this.refreshGate();
  }

  /** Type into a slot; typed text carries no provenance span. */
  typeSlot(slot: string, text: string): void {
    const mode = this.slotModes.get(slot);
    const extractability = (mode?.value ?? "not_extractable") as Extractability;
    this.draft.slots[slot] = { text, extractability, sourceSpan: null };
    const input = this.slotInputs.get(slot);
    if (input && input.value !== text) input.value = text;
    this.persistDraft();
    this.refreshPreview();
    this.refreshGate();
  }

  previewText(): string {
    const template = this.selectedTemplate();
    if (!template) {
      return this.draft.selectedLabel === NOT_APPLICABLE ? NOT_APPLICABLE : "";
    }
    const fillers: Record<string, string> = {};
    for (const [slot, draft] of Object.entries(this.draft.slots)) {
      if (draft.text) fillers[slot] = draft.text;
    }
    return renderPattern(template.surface_forms[this.locale] ?? "", fillers);
  }

  private refreshPreview(): void {
    this.previewBox.textContent = this.previewText();
  }

  override validationProblems(): string[] {
    if (!this.draft.selectedLabel) return ["no template selected"];
    return validateTemplateApplication(
      this.buildPayload() as import("./types.js").TemplateApplicationPayload,
      this.templatesById,
    );
  }

  protected override buildPayload(): SubmissionPayload {
    const label = this.draft.selectedLabel ?? "";
    if (label === NOT_APPLICABLE) return { label, fillers: null };
    const fillers: Record<string, import("./types.js").FillerPayload> = {};
    for (const [slot, draft] of Object.entries(this.draft.slots)) {
      fillers[slot] = slotToFiller(draft);
    }
    return { label, fillers };
  }
}

// ---------------------------------------------------------------------------
// informativeness judging

export class JudgingWorkflow extends WorkflowView {
  constructor(
    api: AnnotationApi,
    readonly task: JudgingTask,
    callbacks: WorkflowCallbacks = {},
  ) {
    super(api, task.item_id, task.revision, callbacks);

    const pair = el("div", "comparison");
    const original = el("div", "original");
    original.appendChild(el("h4", undefined, "Original comment"));
    original.appendChild(el("p", "original-comment", task.original_comment));
    const templated = el("div", "templated");
    templated.appendChild(el("h4", undefined, `Templated comment (${task.template_id})`));
    templated.appendChild(el("p", "templated-comment", task.templated_comment));
    pair.appendChild(original);
    pair.appendChild(templated);
    this.root.appendChild(pair);

    const rubric = el("div", "rubric");
    for (const score of [3, 2, 1] as const) {
      const row = el("label", "rubric-row");
      const radio = el("input") as HTMLInputElement;
      radio.type = "radio";
      radio.name = "informativeness-score";
      radio.value = String(score);
      radio.addEventListener("change", () => this.setScore(score));
      row.appendChild(radio);
      row.appendChild(
        document.createTextNode(` ${score}: ${task.rubric[String(score)] ?? ""}`),
      );
      rubric.appendChild(row);
    }
    this.root.appendChild(rubric);
    this.root.appendChild(this.errorBox);
    this.root.appendChild(this.submitButton);

    if (this.draft.score) this.setScore(this.draft.score);
    this.refreshGate();
  }

  setScore(score: 1 | 2 | 3): void {
    this.draft.score = score;
    const radios = this.root.querySelectorAll<HTMLInputElement>("input[type=radio]");
    radios.forEach((radio) => {
      radio.checked = radio.value === String(score);
    });
    this.persistDraft();
    this.refreshGate();
  }

  override validationProblems(): string[] {
    return validateJudgment({ score: this.draft.score ?? undefined });
  }

  protected override buildPayload(): SubmissionPayload {
    return { score: this.draft.score as 1 | 2 | 3 };
  }
}

// ---------------------------------------------------------------------------

export function mountTask(
  api: AnnotationApi,
  task: Task,
  templateSet: TemplateSetDoc | null,
  locale: string,
  callbacks: WorkflowCallbacks = {},
): WorkflowView {
  switch (task.workflow) {
    case "FreeTextDiagnosis":
      return new FreeTextWorkflow(api, task, callbacks);
    case "TemplateApplication":
      if (!templateSet) throw new Error("template set not loaded");
      return new TemplateApplicationWorkflow(api, task, templateSet, locale, callbacks);
    case "InformativenessJudging":
      return new JudgingWorkflow(api, task, callbacks);
  }
}
