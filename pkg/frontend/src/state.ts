/** Latest-wins guard: a newer request supersedes whatever is in flight. */
export class LatestWins {
  private sequence = 0;

  next(): number {
    return ++this.sequence;
  }

  isCurrent(token: number): boolean {
    return token === this.sequence;
  }
}
