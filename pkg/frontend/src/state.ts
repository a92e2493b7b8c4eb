// Workspace state for the task being annotated, plus draft persistence so
// a reload restores work in progress. One annotator per browser session.

import type { Extractability, FillerPayload, SourceSpan } from "./types.js";

export interface SlotDraft {
  text: string;
  extractability: Extractability;
  sourceSpan: SourceSpan | null;
}

export interface WorkspaceDraft {
  selectedSentences: number[];
  commentText: string;
  selectedLabel: string | null; // template id or NotApplicable
  slots: Record<string, SlotDraft>;
  score: 1 | 2 | 3 | null;
}

export function emptyDraft(): WorkspaceDraft {
  return {
    selectedSentences: [],
    commentText: "",
    selectedLabel: null,
    slots: {},
    score: null,
  };
}

export function slotToFiller(draft: SlotDraft): FillerPayload {
  return {
    text: draft.text,
    extractability: draft.extractability,
    source_span: draft.extractability === "extractable" ? draft.sourceSpan : null,
  };
}

function draftKey(projectId: string, itemId: string): string {
  return `typic-draft/${projectId}/${itemId}`;
}

export function saveDraft(projectId: string, itemId: string, draft: WorkspaceDraft): void {
  try {
    localStorage.setItem(draftKey(projectId, itemId), JSON.stringify(draft));
  } catch {
    // storage full or unavailable; drafts are a convenience only
  }
}

export function loadDraft(projectId: string, itemId: string): WorkspaceDraft | null {
  const raw = localStorage.getItem(draftKey(projectId, itemId));
  if (!raw) return null;
  try {
    const parsed = JSON.parse(raw) as WorkspaceDraft;
    return { ...emptyDraft(), ...parsed };
  } catch {
    return null;
  }
}

export function clearDraft(projectId: string, itemId: string): void {
  localStorage.removeItem(draftKey(projectId, itemId));
}
