package fixtures;

import java.io.DataInputStream;
import java.io.FileInputStream;
import java.io.IOException;
import java.util.List;

public class AnnotatedExamples {
  /* This method should be called before the superclass implementation.*/
  public void dispatchDestroy() {
  }

  /* @throws IOexception thrown on errors while reading the matrix */
  public void load(String filename) throws IOException {
    DataInputStream dis = new DataInputStream(new FileInputStream(filename));
    this.in(dis);
  }

  /*The keyword used to specify a nullable column.*/
  public String getNullColumnString() {
    return " with null";
  }

  /*construct point range (constant range) with given index.*/
  public static PointRange rangePoint(int i) {
    return new PointRange(i);
  }

  /*start and end are not primary keys, they are indexes in the result set.*/
  public List<KBArticle> findByG_L(long groupId, boolean latest, int start, int end) throws SystemException {
    return findByG_L(groupId, latest, start, end, null);
  }

  private void in(DataInputStream dis) {
  }
}
